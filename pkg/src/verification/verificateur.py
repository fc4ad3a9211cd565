"""
Vérification des Corps de Requête
=================================

Contrôle d'un corps JSON avant toute écriture :
- forme (objet / tableau / scalaire) selon le genre de chaque nœud
- représentation lexicale JSON des bases prédéfinies (RFC 7951)
- bornes des bases, motifs (correspondance complète), plages et longueurs
- clés et groupes unique des listes, doublons de leaf-list
- feuilles obligatoires, conflits d'existence en création

Toutes les erreurs sont collectées, dans l'ordre du document.
"""

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Any, Dict, List, Optional, Sequence, Tuple

import regex

from src.coeur.erreurs import FormeIncorrecte, RacineIncorrecte
from src.correspondance.aplatissement import encoder_valeur, resoudre_racines_corps
from src.correspondance.contexte import CibleResolue, ContexteChemin, declare_section
from src.correspondance.lecture import lire_entrees_liste
from src.uci.magasin import AJOUT, CREATION, VueLecture
from src.uci.modeles import est_identifiant
from src.yang.jin import spec_de
from src.yang.modeles import FEUILLE, LISTE, LISTE_FEUILLES, ModuleYang, NoeudJin, SpecType
from src.yang.types_yang import BASES_EN_CHAINE, ENTIERS, bornes_base, dans_intervalles

NOEUD_INCONNU = "unknown-node"
FORME_INCORRECTE = "wrong-shape"
LEXICAL_INVALIDE = "bad-lexical"
MOTIF = "pattern"
PLAGE = "range"
CLE_MANQUANTE = "missing-key"
CLE_DUPLIQUEE = "duplicate-key"
VIOLATION_UNIQUE = "unique-violation"
OBLIGATOIRE_MANQUANT = "mandatory-missing"
CONFLIT_EXISTENCE = "exists-conflict"

MOTIF_ENTIER = regex.compile(r"[+-]?[0-9]+")
MOTIF_DECIMAL = regex.compile(r"[+-]?[0-9]+(\.[0-9]+)?")


@dataclass
class ErreurValidation:
    chemin_json: str
    regle: str
    detail: str

    def en_dictionnaire(self) -> Dict[str, str]:
        return {"path": self.chemin_json, "rule": self.regle, "detail": self.detail}


# ═══════════════════════════════════════════════════════════
# FEUILLES
# ═══════════════════════════════════════════════════════════

def verifier_feuille(spec: SpecType, valeur: Any, chemin_json: str = "") -> Optional[ErreurValidation]:
    """
    Vérifie une valeur JSON contre un type résolu.

    Ordre des contrôles : forme JSON de la base, bornes de la base,
    puis motifs et plage / longueur déclarés.

    Returns:
        None si la valeur est acceptée, sinon l'erreur
    """
    def erreur(regle: str, detail: str) -> ErreurValidation:
        return ErreurValidation(chemin_json, regle, detail)

    base = spec.base

    if base == "boolean":
        if not isinstance(valeur, bool):
            return erreur(LEXICAL_INVALIDE, f"booléen JSON attendu, reçu {valeur!r}")
        return None

    if base in ENTIERS and base not in BASES_EN_CHAINE:
        if isinstance(valeur, bool) or not isinstance(valeur, int):
            return erreur(LEXICAL_INVALIDE, f"nombre entier JSON attendu pour {base}, reçu {valeur!r}")
        return _verifier_nombre(spec, Decimal(valeur), erreur)

    if base in BASES_EN_CHAINE:
        if not isinstance(valeur, str):
            return erreur(LEXICAL_INVALIDE, f"chaîne JSON attendue pour {base}, reçu {valeur!r}")
        if base == "decimal64":
            correspondance = MOTIF_DECIMAL.fullmatch(valeur)
            if correspondance is None:
                return erreur(LEXICAL_INVALIDE, f"décimal invalide : {valeur!r}")
            fraction = correspondance.group(1) or "."
            if len(fraction) - 1 > (spec.chiffres_fraction or 0):
                return erreur(LEXICAL_INVALIDE, f"plus de {spec.chiffres_fraction} chiffres après la virgule")
        elif MOTIF_ENTIER.fullmatch(valeur) is None:
            return erreur(LEXICAL_INVALIDE, f"entier invalide : {valeur!r}")
        try:
            nombre = Decimal(valeur)
        except InvalidOperation:
            return erreur(LEXICAL_INVALIDE, f"nombre invalide : {valeur!r}")
        return _verifier_nombre(spec, nombre, erreur)

    if not isinstance(valeur, str):
        return erreur(LEXICAL_INVALIDE, f"chaîne JSON attendue pour {base}, reçu {valeur!r}")

    if base == "enumeration":
        if valeur not in spec.enums:
            return erreur(LEXICAL_INVALIDE, f"{valeur!r} hors de l'énumération {spec.enums}")
        return None

    if spec.longueur is not None and not dans_intervalles(Decimal(len(valeur)), spec.longueur):
        return erreur(PLAGE, f"longueur {len(valeur)} hors de {_texte_intervalles(spec.longueur)}")
    for motif in spec.motifs:
        if regex.fullmatch(motif, valeur) is None:
            return erreur(MOTIF, f"{valeur!r} ne correspond pas au motif {motif!r}")
    return None


def _verifier_nombre(spec: SpecType, nombre: Decimal, erreur) -> Optional[ErreurValidation]:
    bornes = bornes_base(spec.base, spec.chiffres_fraction)
    if not dans_intervalles(nombre, [bornes]):
        return erreur(PLAGE, f"{nombre} hors des bornes de {spec.base}")
    if spec.plage is not None and not dans_intervalles(nombre, spec.plage):
        return erreur(PLAGE, f"{nombre} hors de {_texte_intervalles(spec.plage)}")
    return None


def _texte_intervalles(intervalles) -> str:
    return " | ".join(f"{bas}..{haut}" if bas != haut else f"{bas}" for bas, haut in intervalles)


# ═══════════════════════════════════════════════════════════
# UNICITÉ
# ═══════════════════════════════════════════════════════════

def verifier_unicite_liste(
    module: ModuleYang,
    noeud: NoeudJin,
    nouveaux: Sequence[Any],
    existants: Sequence[Any] = (),
    chemin_json: str = ""
) -> List[ErreurValidation]:
    """
    Compare clés et groupes unique des nouvelles entrées entre elles
    et avec les entrées existantes ; pour une leaf-list, les valeurs.

    Args:
        module: Modèle (types des feuilles)
        noeud: Nœud list ou leaf-list
        nouveaux: Entrées (objets) ou valeurs du corps
        existants: Entrées ou valeurs déjà stockées
        chemin_json: Chemin du tableau dans le corps

    Returns:
        Une erreur par entrée en double, au chemin de cette entrée
    """
    erreurs: List[ErreurValidation] = []

    if noeud.genre == LISTE_FEUILLES:
        vues = {_cle_comparaison(v) for v in existants}
        for position, valeur in enumerate(nouveaux):
            cle = _cle_comparaison(valeur)
            if cle in vues:
                erreurs.append(ErreurValidation(
                    f"{chemin_json}[{position}]", CLE_DUPLIQUEE, f"valeur {valeur!r} en double"
                ))
            vues.add(cle)
        return erreurs

    groupes: List[Tuple[str, List[str]]] = [(CLE_DUPLIQUEE, noeud.cles)]
    groupes += [(VIOLATION_UNIQUE, groupe) for groupe in noeud.uniques]

    for regle, feuilles in groupes:
        vus = set()
        for item in existants:
            valeurs = _tuple(item, feuilles)
            if valeurs is not None:
                vus.add(valeurs)
        for position, item in enumerate(nouveaux):
            valeurs = _tuple(item, feuilles)
            if valeurs is None:
                continue
            if valeurs in vus:
                texte = ", ".join(f"{nom}={_afficher(v)}" for nom, v in zip(feuilles, valeurs))
                erreurs.append(ErreurValidation(
                    f"{chemin_json}[{position}]", regle, f"({texte}) déjà présent dans {noeud.nom}"
                ))
            vus.add(valeurs)

    return erreurs


def _tuple(item: Any, feuilles: List[str]) -> Optional[tuple]:
    if not isinstance(item, dict):
        return None
    valeurs = []
    for nom in feuilles:
        valeur = _valeur_sans_prefixe(item, nom)
        if valeur is None:
            return None
        valeurs.append(_cle_comparaison(valeur))
    return tuple(valeurs)


def _cle_comparaison(valeur: Any) -> Tuple[str, Any]:
    # True et 1 ne doivent pas se confondre
    return (type(valeur).__name__, valeur if not isinstance(valeur, (dict, list)) else repr(valeur))


def _afficher(valeur: Tuple[str, Any]) -> str:
    return str(valeur[1])


def _valeur_sans_prefixe(objet: Dict[str, Any], nom: str) -> Any:
    for cle, valeur in objet.items():
        if cle == nom or cle.endswith(f":{nom}"):
            return valeur
    return None


# ═══════════════════════════════════════════════════════════
# ARBRE
# ═══════════════════════════════════════════════════════════

def verifier_arbre(
    module: ModuleYang,
    cible: CibleResolue,
    corps: Any,
    lecteur: VueLecture,
    mode: str
) -> List[ErreurValidation]:
    """
    Vérifie un corps de requête contre le schéma et l'état du magasin.

    Args:
        module: Modèle du module visé
        cible: Ressource résolue depuis l'URI
        corps: Corps JSON décodé
        lecteur: Vue du magasin (existence, entrées existantes)
        mode: CREATION, REMPLACEMENT ou AJOUT

    Returns:
        Erreurs dans l'ordre du document (vide si le corps est valide)
    """
    try:
        racines = resoudre_racines_corps(module, cible, corps)
    except FormeIncorrecte as e:
        return [ErreurValidation(e.chemin or "/", FORME_INCORRECTE, e.message)]
    except RacineIncorrecte as e:
        return [ErreurValidation(e.chemin or "/", NOEUD_INCONNU, e.message)]

    verificateur = _Verificateur(module, lecteur, mode)
    for racine in racines:
        chemin = f"/{racine.cle}"
        if racine.est_cible and cible.est_entree_liste:
            verificateur.entree_cible(cible, racine.valeur, chemin)
        else:
            verificateur.noeud(racine.noeud, racine.contexte, racine.valeur, chemin, surveiller=True)
    return verificateur.erreurs


class _Verificateur:

    def __init__(self, module: ModuleYang, lecteur: VueLecture, mode: str):
        self.module = module
        self.lecteur = lecteur
        self.mode = mode
        self.erreurs: List[ErreurValidation] = []

    def ajouter(self, chemin_json: str, regle: str, detail: str):
        self.erreurs.append(ErreurValidation(chemin_json, regle, detail))

    def noeud(self, noeud: NoeudJin, contexte: ContexteChemin, valeur: Any, chemin: str, surveiller: bool):
        """
        `surveiller` : l'existence dans le magasin reste à contrôler
        (aucun ancêtre du corps n'ouvre déjà une nouvelle section).
        """
        if noeud.genre == FEUILLE:
            self.feuille(noeud, valeur, chemin)
            if surveiller:
                self.conflit_option(contexte, chemin)
        elif noeud.genre == LISTE_FEUILLES:
            self.liste_feuilles(noeud, contexte, valeur, chemin, surveiller)
        elif noeud.genre == LISTE:
            self.liste(noeud, contexte, valeur, chemin, surveiller)
        else:
            self.conteneur(noeud, contexte, valeur, chemin, surveiller)

    def feuille(self, noeud: NoeudJin, valeur: Any, chemin: str) -> bool:
        spec = spec_de(self.module, noeud)
        erreur = verifier_feuille(spec, valeur, chemin)
        if erreur is not None:
            self.erreurs.append(erreur)
            return False
        texte = encoder_valeur(spec, valeur)
        if not texte or "'" in texte or "\n" in texte or "\r" in texte:
            self.ajouter(chemin, LEXICAL_INVALIDE, f"valeur non représentable en UCI : {valeur!r}")
            return False
        return True

    def conflit_option(self, contexte: ContexteChemin, chemin: str):
        if self.mode == CREATION and self.lecteur.lire_valeur(contexte.chemin_uci()) is not None:
            self.ajouter(chemin, CONFLIT_EXISTENCE, f"{contexte.chemin_uci().texte()} existe déjà")

    def liste_feuilles(self, noeud: NoeudJin, contexte: ContexteChemin, valeur: Any, chemin: str, surveiller: bool):
        if not isinstance(valeur, list):
            self.ajouter(chemin, FORME_INCORRECTE, "tableau JSON attendu pour une leaf-list")
            return
        valides = [
            element for position, element in enumerate(valeur)
            if self.feuille(noeud, element, f"{chemin}[{position}]")
        ]
        if len(valides) == len(valeur):
            self.erreurs.extend(verifier_unicite_liste(self.module, noeud, valeur, chemin_json=chemin))
        if surveiller:
            self.conflit_option(contexte, chemin)

    def conteneur(self, noeud: NoeudJin, contexte: ContexteChemin, valeur: Any, chemin: str, surveiller: bool):
        if not isinstance(valeur, dict):
            self.ajouter(chemin, FORME_INCORRECTE, f"objet JSON attendu pour le container {noeud.nom}")
            return
        if surveiller and declare_section(noeud):
            surveiller = False
            if self.mode == CREATION and self.lecteur.section_existe(contexte.chemin_uci()):
                self.ajouter(chemin, CONFLIT_EXISTENCE, f"la section {contexte.chemin_uci().texte()} existe déjà")
        self.enfants(noeud, contexte, valeur, chemin, surveiller)

    def liste(self, noeud: NoeudJin, contexte: ContexteChemin, valeur: Any, chemin: str, surveiller: bool):
        if not isinstance(valeur, list):
            self.ajouter(chemin, FORME_INCORRECTE, f"tableau JSON attendu pour la list {noeud.nom}")
            return

        existants: List[Dict[str, Any]] = []
        nombre = self.lecteur.compter_sections(contexte.paquet, contexte.section)
        if self.mode == CREATION and nombre > 0:
            self.ajouter(chemin, CONFLIT_EXISTENCE, f"la list {noeud.nom} a déjà {nombre} entrée(s)")
        if self.mode == AJOUT:
            existants = lire_entrees_liste(self.module, noeud, contexte, self.lecteur)

        for position, item in enumerate(valeur):
            self.item(noeud, contexte, item, f"{chemin}[{position}]")

        self.erreurs.extend(verifier_unicite_liste(self.module, noeud, valeur, existants, chemin))

    def item(self, liste: NoeudJin, contexte: ContexteChemin, item: Any, chemin: str):
        if not isinstance(item, dict):
            self.ajouter(chemin, FORME_INCORRECTE, f"objet JSON attendu pour une entrée de {liste.nom}")
            return
        for cle in liste.cles:
            if _valeur_sans_prefixe(item, cle) is None:
                self.ajouter(f"{chemin}/{cle}", CLE_MANQUANTE, f"clé {cle} absente de l'entrée")
        nom_feuille = liste.uci.feuille_comme_nom
        if nom_feuille is not None:
            valeur = _valeur_sans_prefixe(item, nom_feuille)
            if valeur is not None:
                texte = encoder_valeur(spec_de(self.module, liste.enfants[nom_feuille]), valeur)
                if not est_identifiant(texte):
                    self.ajouter(
                        f"{chemin}/{nom_feuille}", LEXICAL_INVALIDE,
                        f"{texte!r} ne peut pas servir de nom de section UCI"
                    )
        self.enfants(liste, contexte, item, chemin, surveiller=False)

    def entree_cible(self, cible: CibleResolue, valeur: Any, chemin: str):
        """Corps d'un PUT sur une entrée de liste : tableau d'une entrée ou objet."""
        liste = cible.noeud
        if isinstance(valeur, list):
            if len(valeur) != 1:
                self.ajouter(chemin, FORME_INCORRECTE, "une seule entrée attendue")
                return
            valeur = valeur[0]
            chemin = f"{chemin}[0]"
        self.item(liste, cible.contexte, valeur, chemin)
        if not isinstance(valeur, dict):
            return

        for cle, attendue in zip(liste.cles, cible.entree_liste):
            recue = _valeur_sans_prefixe(valeur, cle)
            if recue is not None and encoder_valeur(spec_de(self.module, liste.enfants[cle]), recue) != attendue:
                self.ajouter(f"{chemin}/{cle}", CLE_MANQUANTE, f"clé {recue!r} différente de l'URI ({attendue!r})")

        existants = lire_entrees_liste(self.module, liste, _contexte_liste(cible), self.lecteur)
        if cible.existe and cible.contexte.index is not None and cible.contexte.index < len(existants):
            existants.pop(cible.contexte.index)
        elif cible.existe:
            existants = [e for e in existants if _tuple(e, liste.cles) != _tuple(valeur, liste.cles)]
        for erreur in verifier_unicite_liste(self.module, liste, [valeur], existants):
            erreur.chemin_json = chemin
            self.erreurs.append(erreur)

    def enfants(self, parent: NoeudJin, contexte: ContexteChemin, objet: Dict[str, Any], chemin: str, surveiller: bool):
        presents = set()
        for cle, valeur in objet.items():
            prefixe, separateur, nom = cle.rpartition(":")
            enfant = parent.enfants.get(nom)
            if enfant is None or (separateur and prefixe != self.module.nom):
                self.ajouter(f"{chemin}/{cle}", NOEUD_INCONNU, f"{cle!r} n'existe pas sous {parent.nom}")
                continue
            presents.add(nom)
            self.noeud(enfant, contexte.descendre(enfant), valeur, f"{chemin}/{cle}", surveiller)

        if self.mode != AJOUT or parent.genre == LISTE:
            for feuille in parent.feuilles():
                if feuille.obligatoire and feuille.nom not in presents:
                    self.ajouter(f"{chemin}/{feuille.nom}", OBLIGATOIRE_MANQUANT, f"feuille {feuille.nom} obligatoire")


def _contexte_liste(cible: CibleResolue) -> ContexteChemin:
    contexte = cible.contexte
    return ContexteChemin(paquet=contexte.paquet, section=contexte.section, ascendance=contexte.ascendance)
