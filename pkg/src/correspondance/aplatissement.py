"""
Aplatissement JSON -> UCI
=========================

Parcours en profondeur d'un corps de requête : chaque feuille donne
un triplet option, chaque valeur de leaf-list un triplet list, chaque
container qui ouvre sa section un triplet container placé avant ses
descendants. Les entrées d'une liste reçoivent leur index (0.. en
création et remplacement, à partir du nombre de sections existantes
en ajout) ou leur nom quand la liste déclare leaf-as-name.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from src.coeur.erreurs import FormeIncorrecte, RacineIncorrecte
from src.correspondance.contexte import CibleResolue, ContexteChemin, declare_section
from src.correspondance.localisation import contexte_entree
from src.uci.magasin import AJOUT, VueLecture
from src.uci.modeles import CONTENEUR, LISTE as LISTE_UCI, OPTION, EntreeAplatie
from src.yang.jin import spec_de
from src.yang.modeles import FEUILLE, LISTE, LISTE_FEUILLES, ModuleYang, NoeudJin, SpecType


@dataclass
class RacineCorps:
    """Clé de premier niveau d'un corps de requête, rattachée au schéma."""
    cle: str
    noeud: NoeudJin
    contexte: ContexteChemin
    valeur: Any
    est_cible: bool


def resoudre_racines_corps(module: ModuleYang, cible: CibleResolue, corps: Any) -> List[RacineCorps]:
    """
    Rattache les clés de premier niveau du corps au nœud visé ou à l'un
    de ses enfants. Sous la racine d'un module, les clés doivent être
    qualifiées `<module>:<nœud>`.

    Raises:
        FormeIncorrecte: le corps n'est pas un objet
        RacineIncorrecte: clé qui ne désigne ni la cible ni un enfant
    """
    if not isinstance(corps, dict):
        raise FormeIncorrecte("le corps doit être un objet JSON", "/")
    if not corps:
        raise RacineIncorrecte("corps vide", "/")
    if len(corps) > 1 and not cible.est_racine_module:
        raise RacineIncorrecte("le corps doit avoir une seule clé racine", "/")

    racines = []
    for cle, valeur in corps.items():
        prefixe, separateur, nom = cle.rpartition(":")
        if separateur and prefixe != module.nom:
            raise RacineIncorrecte(f"module {prefixe!r} au lieu de {module.nom!r}", f"/{cle}")
        if not separateur and cible.est_racine_module:
            raise RacineIncorrecte(f"clé non qualifiée {cle!r}", f"/{cle}")

        noeud = cible.noeud
        if not cible.est_racine_module and nom == noeud.nom:
            racines.append(RacineCorps(cle, noeud, cible.contexte, valeur, True))
            continue

        enfant = noeud.enfants.get(nom)
        if enfant is None or (noeud.genre == LISTE and not cible.est_entree_liste):
            raise RacineIncorrecte(
                f"{cle!r} ne désigne ni {cible.nom_qualifie} ni l'un de ses enfants", f"/{cle}"
            )
        racines.append(RacineCorps(cle, enfant, cible.contexte.descendre(enfant), valeur, False))

    return racines


def encoder_valeur(spec: SpecType, valeur: Any) -> str:
    """Texte UCI d'une valeur JSON déjà vérifiée."""
    if spec.base == "boolean":
        return "true" if valeur else "false"
    return str(valeur)


def json_vers_entrees(
    module: ModuleYang,
    cible: CibleResolue,
    corps: Any,
    mode: str,
    lecteur: VueLecture
) -> List[EntreeAplatie]:
    """
    Aplatit un corps vérifié en triplets (chemin UCI, genre, valeur).

    Args:
        module: Modèle du module visé
        cible: Ressource résolue depuis l'URI
        corps: Corps JSON décodé
        mode: CREATION, REMPLACEMENT ou AJOUT
        lecteur: Vue du magasin (nombre de sections en ajout)

    Returns:
        Triplets dans l'ordre du corps, chaque container avant ses descendants

    Raises:
        RacineIncorrecte, FormeIncorrecte
    """
    sortie: List[EntreeAplatie] = []
    aplatisseur = _Aplatisseur(module, mode, lecteur, sortie)

    for racine in resoudre_racines_corps(module, cible, corps):
        if racine.est_cible and cible.est_entree_liste:
            item = racine.valeur
            if isinstance(item, list) and len(item) == 1:
                item = item[0]
            aplatisseur.entree_liste(racine.noeud, cible.contexte, item, f"/{racine.cle}")
        else:
            aplatisseur.noeud(racine.noeud, racine.contexte, racine.valeur, f"/{racine.cle}")

    return sortie


class _Aplatisseur:

    def __init__(self, module: ModuleYang, mode: str, lecteur: VueLecture, sortie: List[EntreeAplatie]):
        self.module = module
        self.mode = mode
        self.lecteur = lecteur
        self.sortie = sortie

    def noeud(self, noeud: NoeudJin, contexte: ContexteChemin, valeur: Any, chemin_json: str):
        if noeud.genre == FEUILLE:
            texte = encoder_valeur(spec_de(self.module, noeud), valeur)
            self.sortie.append(EntreeAplatie(contexte.chemin_uci(), OPTION, texte))

        elif noeud.genre == LISTE_FEUILLES:
            spec = spec_de(self.module, noeud)
            for element in _tableau(valeur, chemin_json):
                self.sortie.append(EntreeAplatie(contexte.chemin_uci(), LISTE_UCI, encoder_valeur(spec, element)))

        elif noeud.genre == LISTE:
            debut = 0
            if self.mode == AJOUT:
                debut = self.lecteur.compter_sections(contexte.paquet, contexte.section)
            for position, item in enumerate(_tableau(valeur, chemin_json)):
                contexte_item = self._contexte_item(noeud, contexte, item, debut + position)
                self.entree_liste(noeud, contexte_item, item, f"{chemin_json}[{position}]")

        else:
            objet = _objet(valeur, chemin_json)
            if declare_section(noeud):
                self.sortie.append(EntreeAplatie(contexte.chemin_uci(), CONTENEUR))
            self._enfants(noeud, contexte, objet, chemin_json)

    def entree_liste(self, liste: NoeudJin, contexte: ContexteChemin, item: Any, chemin_json: str):
        self._enfants(liste, contexte, _objet(item, chemin_json), chemin_json)

    def _contexte_item(self, liste: NoeudJin, contexte: ContexteChemin, item: Any, index: int) -> ContexteChemin:
        valeurs: Dict[str, Optional[str]] = {}
        nom_feuille = liste.uci.feuille_comme_nom
        if nom_feuille is not None and isinstance(item, dict) and nom_feuille in item:
            spec = spec_de(self.module, liste.enfants[nom_feuille])
            valeurs[nom_feuille] = encoder_valeur(spec, item[nom_feuille])
        return contexte_entree(liste, contexte, index, valeurs)

    def _enfants(self, parent: NoeudJin, contexte: ContexteChemin, objet: Dict[str, Any], chemin_json: str):
        for cle, valeur in objet.items():
            nom = cle.split(":", 1)[1] if ":" in cle else cle
            enfant = parent.enfants.get(nom)
            if enfant is None:
                raise RacineIncorrecte(f"nœud inconnu {cle!r}", f"{chemin_json}/{cle}")
            self.noeud(enfant, contexte.descendre(enfant), valeur, f"{chemin_json}/{cle}")


def _objet(valeur: Any, chemin_json: str) -> Dict[str, Any]:
    if not isinstance(valeur, dict):
        raise FormeIncorrecte("objet JSON attendu", chemin_json)
    return valeur


def _tableau(valeur: Any, chemin_json: str) -> List[Any]:
    if not isinstance(valeur, list):
        raise FormeIncorrecte("tableau JSON attendu", chemin_json)
    return valeur
