"""
Lecture UCI -> JSON
===================

Parcours en profondeur du modèle depuis le nœud visé : chaque feuille
lit son option et la décode selon la base de son type, une liste
itère sur le nombre de sections de son type en transmettant l'index
aux enfants. Les valeurs lues ne sont pas vérifiées.
"""

from typing import Any, Dict, List

from src.coeur.erreurs import ElementIntrouvable
from src.coeur.journalisation import journaliseur
from src.correspondance.contexte import CibleResolue, ContexteChemin
from src.uci.magasin import VueLecture
from src.uci.modeles import ValeurMultiple, ValeurUnique
from src.yang.jin import spec_de
from src.yang.modeles import FEUILLE, LISTE, LISTE_FEUILLES, ModuleYang, NoeudJin, SpecType
from src.yang.types_yang import BASES_EN_CHAINE, ENTIERS

VRAI = {"true", "1", "yes", "on", "enabled"}
FAUX = {"false", "0", "no", "off", "disabled"}

ABSENT = object()


def decoder_valeur(spec: SpecType, texte: str) -> Any:
    """
    Valeur JSON d'un texte UCI selon la base du type. Un texte
    indécodable est rendu tel quel.
    """
    base = spec.base
    if base == "boolean":
        if texte.lower() in VRAI:
            return True
        if texte.lower() in FAUX:
            return False
    elif base in ENTIERS and base not in BASES_EN_CHAINE:
        try:
            return int(texte, 10)
        except ValueError:
            pass
    else:
        return texte

    journaliseur.avertissement(f"Valeur UCI {texte!r} non décodable en {base}, rendue telle quelle")
    return texte


def uci_vers_json(module: ModuleYang, cible: CibleResolue, lecteur: VueLecture) -> Any:
    """
    Valeur JSON de la ressource visée.

    Returns:
        Objet pour un container ou une entrée de liste, tableau pour une
        liste ou une leaf-list, scalaire pour une feuille

    Raises:
        ElementIntrouvable: feuille ou leaf-list absente du magasin
    """
    noeud, contexte = cible.noeud, cible.contexte

    if cible.est_entree_liste:
        return _objet(module, noeud, contexte, lecteur)

    valeur = _valeur(module, noeud, contexte, lecteur)
    if valeur is not ABSENT:
        return valeur
    if noeud.est_feuille:
        raise ElementIntrouvable(f"aucune valeur pour {cible.nom_qualifie}", contexte.chemin_uci().texte())
    return [] if noeud.genre == LISTE else {}


def lire_entrees_liste(
    module: ModuleYang,
    liste: NoeudJin,
    contexte: ContexteChemin,
    lecteur: VueLecture
) -> List[Dict[str, Any]]:
    """Entrées existantes d'une liste, index par index (entrées vides comprises)."""
    nombre = lecteur.compter_sections(contexte.paquet, contexte.section)
    return [
        _objet(module, liste, contexte.avec_index(index), lecteur)
        for index in range(nombre)
    ]


def _valeur(module: ModuleYang, noeud: NoeudJin, contexte: ContexteChemin, lecteur: VueLecture) -> Any:
    if noeud.genre == FEUILLE:
        lue = lecteur.lire_valeur(contexte.chemin_uci())
        if lue is None:
            return ABSENT
        texte = lue.texte if isinstance(lue, ValeurUnique) else lue.textes[-1]
        return decoder_valeur(spec_de(module, noeud), texte)

    if noeud.genre == LISTE_FEUILLES:
        lue = lecteur.lire_valeur(contexte.chemin_uci())
        if lue is None:
            return ABSENT
        textes = lue.textes if isinstance(lue, ValeurMultiple) else [lue.texte]
        spec = spec_de(module, noeud)
        return [decoder_valeur(spec, texte) for texte in textes]

    if noeud.genre == LISTE:
        entrees = [e for e in lire_entrees_liste(module, noeud, contexte, lecteur) if e]
        return entrees if entrees else ABSENT

    objet = _objet(module, noeud, contexte, lecteur)
    return objet if objet else ABSENT


def _objet(
    module: ModuleYang,
    noeud: NoeudJin,
    contexte: ContexteChemin,
    lecteur: VueLecture
) -> Dict[str, Any]:
    objet: Dict[str, Any] = {}
    for nom, enfant in noeud.enfants.items():
        valeur = _valeur(module, enfant, contexte.descendre(enfant), lecteur)
        if valeur is not ABSENT:
            objet[nom] = valeur
    return objet
