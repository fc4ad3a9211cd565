"""
Hiérarchie des Erreurs
======================

Toutes les erreurs métier du serveur dérivent de ErreurOrc.
Chaque classe porte son statut HTTP et son étiquette d'erreur,
ce qui permet à la couche RESTCONF de construire la réponse
sans table de correspondance.
"""

from typing import Any, Dict, List, Optional


class ErreurOrc(Exception):
    """Erreur de base du serveur RESTCONF."""

    statut_http: int = 500
    etiquette: str = "operation-failed"

    def __init__(self, message: str, chemin: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.chemin = chemin


# ═══════════════════════════════════════════════════════════
# MAGASIN UCI
# ═══════════════════════════════════════════════════════════

class ErreurSyntaxeUci(ErreurOrc):
    """Fichier UCI mal formé."""

    statut_http = 500
    etiquette = "malformed-configuration"

    def __init__(self, ligne: int, raison: str):
        super().__init__(f"ligne {ligne} : {raison}")
        self.ligne = ligne
        self.raison = raison


class ErreurEntreeSortieMagasin(ErreurOrc):
    """Lecture ou écriture impossible dans le répertoire du magasin."""

    statut_http = 500
    etiquette = "operation-failed"


class CheminAmbigu(ErreurOrc):
    """Le chemin UCI ne désigne pas une section unique."""

    statut_http = 400
    etiquette = "invalid-value"


class ConflitEcriture(ErreurOrc):
    """Création d'une section ou d'une option déjà présente."""

    statut_http = 409
    etiquette = "data-exists"


class ElementIntrouvable(ErreurOrc):
    """Rien ne correspond au chemin demandé."""

    statut_http = 404
    etiquette = "invalid-value"


class DelaiVerrouDepasse(ErreurOrc):
    """Le verrou d'écriture n'a pas pu être obtenu à temps."""

    statut_http = 500
    etiquette = "lock-denied"


class ValeurNonSupportee(ErreurOrc):
    """Valeur non représentable dans un fichier UCI."""

    statut_http = 400
    etiquette = "invalid-value"


# ═══════════════════════════════════════════════════════════
# YANG / JIN
# ═══════════════════════════════════════════════════════════

class ErreurSyntaxeYang(ErreurOrc):
    """Source YANG mal formée."""

    etiquette = "malformed-module"

    def __init__(self, ligne: int, raison: str):
        super().__init__(f"ligne {ligne} : {raison}")
        self.ligne = ligne
        self.raison = raison


class InstructionNonSupportee(ErreurSyntaxeYang):
    """Instruction YANG hors du sous-ensemble pris en charge."""

    etiquette = "unsupported-statement"

    def __init__(self, nom: str, ligne: int):
        super().__init__(ligne, f"instruction non supportée : {nom}")
        self.nom = nom


class ErreurAnnotation(ErreurOrc):
    """Conversion demandée alors que des diagnostics sont en suspens."""

    etiquette = "annotation-error"

    def __init__(self, diagnostics: List[Any]):
        super().__init__(f"{len(diagnostics)} diagnostic(s) d'annotation en suspens")
        self.diagnostics = diagnostics


class ErreurFormatJin(ErreurOrc):
    """Document JIN incomplet ou mal typé."""

    etiquette = "malformed-model"

    def __init__(self, chemin: str, raison: str):
        super().__init__(f"{chemin} : {raison}", chemin=chemin)
        self.raison = raison


class TypeInconnu(ErreurOrc):
    """Référence de type ni prédéfinie ni déclarée."""

    etiquette = "unknown-type"

    def __init__(self, nom_type: str):
        super().__init__(f"type inconnu : {nom_type}")
        self.nom_type = nom_type


# ═══════════════════════════════════════════════════════════
# CORRESPONDANCE URI / JSON / UCI
# ═══════════════════════════════════════════════════════════

class ModuleInconnu(ErreurOrc):
    statut_http = 404
    etiquette = "invalid-value"


class NoeudInconnu(ErreurOrc):
    statut_http = 404
    etiquette = "invalid-value"


class EntreeListeInconnue(ErreurOrc):
    statut_http = 404
    etiquette = "invalid-value"


class CleManquante(ErreurOrc):
    statut_http = 400
    etiquette = "missing-attribute"


class RacineIncorrecte(ErreurOrc):
    """La clé racine du corps ne nomme ni la cible ni un de ses enfants."""

    statut_http = 400
    etiquette = "unknown-element"


class FormeIncorrecte(ErreurOrc):
    """Objet attendu mais tableau reçu, ou inversement."""

    statut_http = 400
    etiquette = "wrong-shape"


# ═══════════════════════════════════════════════════════════
# PROTOCOLE
# ═══════════════════════════════════════════════════════════

class MessageMalforme(ErreurOrc):
    statut_http = 400
    etiquette = "malformed-message"


class TypeMediaNonSupporte(ErreurOrc):
    statut_http = 415
    etiquette = "invalid-value"


class MethodeNonAutorisee(ErreurOrc):
    statut_http = 405
    etiquette = "operation-not-supported"

    def __init__(self, message: str, methodes_autorisees: List[str]):
        super().__init__(message)
        self.methodes_autorisees = methodes_autorisees


class ErreursValidation(ErreurOrc):
    """Regroupe les erreurs de validation d'un corps de requête."""

    def __init__(self, erreurs: List[Any]):
        premiere = erreurs[0]
        super().__init__(premiere.detail, chemin=premiere.chemin_json)
        self.erreurs = erreurs
        conflit = any(e.regle == "exists-conflict" for e in erreurs)
        self.statut_http = 409 if conflit else 400
        self.etiquette = "exists-conflict" if conflit else premiere.regle

    def en_dictionnaires(self) -> List[Dict[str, str]]:
        return [e.en_dictionnaire() for e in self.erreurs]
