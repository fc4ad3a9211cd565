"""
Localisation d'une Ressource
============================

Parcours du modèle JIN segment par segment jusqu'au nœud visé par
l'URI, en accumulant le contexte UCI. Un sélecteur `nom=clé` est
résolu en index par comparaison des valeurs de clé stockées dans
les sections du type de la liste.
"""

from typing import Dict, List, Optional, Sequence, Set, Union

from src.coeur.erreurs import (
    CleManquante,
    EntreeListeInconnue,
    ModuleInconnu,
    NoeudInconnu,
)
from src.correspondance.contexte import CibleResolue, ContexteChemin, SegmentUri, declare_section
from src.uci.magasin import VueLecture
from src.uci.modeles import CheminUci, ValeurMultiple, ValeurUnique
from src.yang.modeles import LISTE, ModuleYang, NoeudJin

Segment = Union[str, SegmentUri]


def localiser(
    modeles: Dict[str, ModuleYang],
    segments: Sequence[Segment],
    lecteur: VueLecture,
    exiger_existence: bool = True
) -> CibleResolue:
    """
    Résout une suite de segments d'URI.

    Args:
        modeles: Modèles chargés, par nom de module
        segments: Segments décodés ; le premier est `<module>:<nœud>`
        lecteur: Vue de lecture du magasin (résolution des clés)
        exiger_existence: Si faux, une entrée de liste absente est acceptée
            (PUT de création) et reçoit l'index suivant le dernier

    Raises:
        ModuleInconnu, NoeudInconnu, EntreeListeInconnue, CleManquante
    """
    segments = [s if isinstance(s, SegmentUri) else SegmentUri.depuis_texte(s) for s in segments]
    if not segments:
        raise NoeudInconnu("aucun nœud désigné")

    premier = segments[0]
    nom_module, separateur, nom_noeud = premier.nom.partition(":")
    if not separateur or nom_module not in modeles:
        raise ModuleInconnu(f"module inconnu : {nom_module or premier.nom!r}", str(premier))

    module = modeles[nom_module]
    noeud = module.racine
    contexte = ContexteChemin.depuis_module(module)
    cible: Optional[CibleResolue] = None

    for position, segment in enumerate(segments):
        nom = nom_noeud if position == 0 else _sans_prefixe(segment.nom, module)

        if cible is not None and cible.noeud.genre == LISTE and not cible.est_entree_liste:
            raise CleManquante(
                f"la list {cible.noeud.nom} doit être adressée par clé avant {nom}",
                str(segment)
            )

        enfant = noeud.enfants.get(nom)
        if enfant is None:
            raise NoeudInconnu(f"nœud inconnu : {nom!r} sous {noeud.nom}", str(segment))

        noeud = enfant
        contexte = contexte.descendre(enfant)
        cible = CibleResolue(module=module, noeud=noeud, contexte=contexte)

        if segment.cles is not None:
            if noeud.genre != LISTE:
                raise NoeudInconnu(f"{nom} n'est pas une list", str(segment))
            cible = _resoudre_entree(cible, segment, lecteur, exiger_existence)
            contexte = cible.contexte

    return cible


def _sans_prefixe(nom: str, module: ModuleYang) -> str:
    prefixe, separateur, reste = nom.partition(":")
    if separateur and prefixe == module.nom:
        return reste
    return nom


def _resoudre_entree(
    cible: CibleResolue,
    segment: SegmentUri,
    lecteur: VueLecture,
    exiger_existence: bool
) -> CibleResolue:
    noeud = cible.noeud
    if len(segment.cles) != len(noeud.cles):
        raise CleManquante(
            f"{noeud.nom} attend {len(noeud.cles)} clé(s) ({', '.join(noeud.cles)})",
            str(segment)
        )

    valeurs = tuple(segment.cles)
    index = trouver_index(cible.module, noeud, cible.contexte, valeurs, lecteur)
    existe = index is not None

    if existe:
        # section déjà présente : son nom réel peut différer de la clé, voire manquer
        contexte = cible.contexte.avec_index(index)
    else:
        if exiger_existence:
            raise EntreeListeInconnue(f"aucune entrée {segment}", str(segment))
        index = lecteur.compter_sections(cible.contexte.paquet, cible.contexte.section)
        contexte = contexte_entree(noeud, cible.contexte, index, dict(zip(noeud.cles, valeurs)))
    return CibleResolue(
        module=cible.module,
        noeud=noeud,
        contexte=contexte,
        entree_liste=valeurs,
        existe=existe,
    )


def contexte_entree(
    liste: NoeudJin,
    contexte: ContexteChemin,
    index: int,
    valeurs: Dict[str, str]
) -> ContexteChemin:
    """
    Contexte d'une entrée de liste à écrire : nommée par la feuille
    leaf-as-name quand la liste en déclare une et que sa valeur est connue,
    sinon par index. Une entrée existante est toujours adressée par index.
    """
    nom_feuille = liste.uci.feuille_comme_nom
    if nom_feuille is not None and valeurs.get(nom_feuille) is not None:
        return contexte.avec_nom(valeurs[nom_feuille])
    return contexte.avec_index(index)


def trouver_index(
    module: ModuleYang,
    liste: NoeudJin,
    contexte: ContexteChemin,
    valeurs: Sequence[str],
    lecteur: VueLecture
) -> Optional[int]:
    """Première section du type dont les options de clé valent `valeurs`."""
    nombre = lecteur.compter_sections(contexte.paquet, contexte.section)
    for index in range(nombre):
        entree = contexte.avec_index(index)
        if all(
            _texte_stocke(lecteur, entree.descendre(liste.enfants[cle]).chemin_uci()) == valeur
            for cle, valeur in zip(liste.cles, valeurs)
        ):
            return index
    return None


def _texte_stocke(lecteur: VueLecture, chemin: CheminUci) -> Optional[str]:
    valeur = lecteur.lire_valeur(chemin)
    if isinstance(valeur, ValeurUnique):
        return valeur.texte
    if isinstance(valeur, ValeurMultiple):
        return valeur.textes[-1]
    return None


def cible_existe(cible: CibleResolue, lecteur: VueLecture) -> bool:
    """Présence de la ressource visée dans le magasin (PUT : 201 ou 204)."""
    noeud, contexte = cible.noeud, cible.contexte
    if cible.est_entree_liste:
        return cible.existe
    if noeud.est_feuille:
        return lecteur.lire_valeur(contexte.chemin_uci()) is not None
    if noeud.genre == LISTE:
        return lecteur.compter_sections(contexte.paquet, contexte.section) > 0
    if declare_section(noeud):
        return lecteur.section_existe(contexte.chemin_uci())
    return any(
        cible_existe(CibleResolue(cible.module, enfant, contexte.descendre(enfant)), lecteur)
        for enfant in noeud.enfants.values()
    )


def resoudre_suppression(cible: CibleResolue) -> CheminUci:
    """
    Chemin UCI principal d'une suppression : option d'une feuille,
    section d'un container ou d'une entrée, type entier d'une liste.
    """
    contexte = cible.contexte
    if cible.noeud.est_feuille:
        return contexte.chemin_uci()
    if cible.noeud.genre == LISTE and not cible.est_entree_liste:
        return contexte.chemin_type()
    return contexte.chemin_uci()


def chemins_sous_arbre(cible: CibleResolue) -> List[CheminUci]:
    """
    Tous les chemins UCI couverts par la ressource : son propre chemin,
    plus pour un container les sections et types de liste de ses
    descendants qui ne sont pas déjà compris dans une section retenue.
    """
    if cible.noeud.est_feuille or cible.noeud.genre == LISTE:
        return [resoudre_suppression(cible)]

    chemins: List[CheminUci] = []
    sections: Set[CheminUci] = set()

    def ajouter_section(chemin: CheminUci):
        if chemin not in sections:
            sections.add(chemin)
            chemins.append(chemin)

    def parcourir(noeud: NoeudJin, contexte: ContexteChemin):
        if noeud.est_feuille:
            chemin = contexte.chemin_uci()
            if chemin.sans_option() not in sections and chemin not in chemins:
                chemins.append(chemin)
            return
        if noeud.genre == LISTE:
            chemin = contexte.chemin_type()
            if chemin not in chemins:
                chemins.append(chemin)
            return
        if declare_section(noeud):
            ajouter_section(contexte.chemin_uci())
        for enfant in noeud.enfants.values():
            parcourir(enfant, contexte.descendre(enfant))

    if cible.est_racine_module:
        for enfant in cible.noeud.enfants.values():
            parcourir(enfant, cible.contexte.descendre(enfant))
    else:
        parcourir(cible.noeud, cible.contexte)
    return chemins
