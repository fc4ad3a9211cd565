"""
Règles des Annotations UCI
==========================

Contrôle qu'un arbre annoté se projette sans ambiguïté sur des
fichiers UCI : portée du paquet et de la section, option réservée aux
feuilles, listes avec section mais sans nom de section, leaf-as-name
désignant une feuille de la liste, identifiants UCI valides, et aucun
container ni list imbriqué dans une list.
"""

from dataclasses import dataclass
from typing import List, Optional

from src.uci.modeles import MOTIF_PAQUET, est_identifiant, est_type_section
from src.yang.modeles import (
    CONTENEUR,
    FEUILLE,
    LISTE,
    Diagnostic,
    ModuleYang,
    NoeudJin,
)

PAQUET_MANQUANT = "MissingPackage"
SECTION_MANQUANTE = "MissingSection"
OPTION_HORS_FEUILLE = "OptionOnNonLeaf"
LISTE_SANS_SECTION = "ListMissingSection"
LISTE_AVEC_NOM_SECTION = "ListHasSectionName"
FEUILLE_NOM_HORS_LISTE = "LeafAsNameOnNonList"
FEUILLE_NOM_INVALIDE = "LeafAsNameNotALeaf"
IDENTIFIANT_UCI_INVALIDE = "InvalidUciIdentifier"
IMBRICATION_DANS_LISTE = "NestedInListUnsupported"


@dataclass(frozen=True)
class Portee:
    """Annotations effectives héritées des ancêtres."""
    paquet: Optional[str] = None
    section: Optional[str] = None
    dans_liste: Optional[str] = None


def completer_noms_section(noeud: NoeudJin):
    """Un container qui déclare seulement sa section reçoit un nom de section vide."""
    if noeud.genre == CONTENEUR and noeud.uci.section and noeud.uci.nom_section is None:
        noeud.uci.nom_section = ""
    for enfant in noeud.enfants.values():
        completer_noms_section(enfant)


def verifier_annotations(module: ModuleYang) -> List[Diagnostic]:
    """
    Vérifie les règles de correspondance sur tout l'arbre du module.

    Args:
        module: Module analysé ou chargé

    Returns:
        Diagnostics dans l'ordre du document (liste vide si le module est valide)
    """
    diagnostics: List[Diagnostic] = []
    racine = module.racine

    if racine.uci.option is not None:
        diagnostics.append(_diagnostic(
            OPTION_HORS_FEUILLE, "uci:option sur le module", "/", racine
        ))
    if racine.uci.paquet is not None:
        _controler_paquet(racine, "/", diagnostics)
    if racine.uci.feuille_comme_nom is not None:
        diagnostics.append(_diagnostic(
            FEUILLE_NOM_HORS_LISTE, "uci:leaf-as-name sur le module", "/", racine
        ))
    portee = Portee(paquet=racine.uci.paquet, section=racine.uci.section)

    for enfant in racine.enfants.values():
        _verifier_noeud(enfant, portee, f"/{enfant.nom}", diagnostics)

    return diagnostics


def _verifier_noeud(noeud: NoeudJin, portee: Portee, chemin: str, diagnostics: List[Diagnostic]):
    uci = noeud.uci

    if portee.dans_liste is not None and noeud.genre in (CONTENEUR, LISTE):
        diagnostics.append(_diagnostic(
            IMBRICATION_DANS_LISTE,
            f"{noeud.genre} {noeud.nom} imbriqué dans la list {portee.dans_liste}",
            chemin, noeud
        ))
        return

    if uci.paquet is not None:
        _controler_paquet(noeud, chemin, diagnostics)
    if uci.section is not None and not est_type_section(uci.section):
        diagnostics.append(_diagnostic(
            IDENTIFIANT_UCI_INVALIDE, f"type de section invalide : {uci.section!r}", chemin, noeud
        ))
    if uci.nom_section and not est_identifiant(uci.nom_section):
        diagnostics.append(_diagnostic(
            IDENTIFIANT_UCI_INVALIDE, f"nom de section invalide : {uci.nom_section!r}", chemin, noeud
        ))

    paquet = uci.paquet if uci.paquet is not None else portee.paquet
    section = uci.section if uci.section is not None else portee.section

    if noeud.est_feuille:
        if uci.option is not None and not est_identifiant(uci.option):
            diagnostics.append(_diagnostic(
                IDENTIFIANT_UCI_INVALIDE, f"nom d'option invalide : {uci.option!r}", chemin, noeud
            ))
        if uci.option is None and not est_identifiant(noeud.nom):
            diagnostics.append(_diagnostic(
                IDENTIFIANT_UCI_INVALIDE,
                f"{noeud.nom!r} n'est pas un nom d'option UCI ; déclarer uci:option",
                chemin, noeud
            ))
        if uci.feuille_comme_nom is not None:
            diagnostics.append(_diagnostic(
                FEUILLE_NOM_HORS_LISTE, "uci:leaf-as-name hors d'une list", chemin, noeud
            ))
        if paquet is None:
            diagnostics.append(_diagnostic(
                PAQUET_MANQUANT, f"aucun uci:package pour {noeud.nom}", chemin, noeud
            ))
        elif section is None:
            diagnostics.append(_diagnostic(
                SECTION_MANQUANTE, f"aucune uci:section pour {noeud.nom}", chemin, noeud
            ))
        return

    if uci.option is not None:
        diagnostics.append(_diagnostic(
            OPTION_HORS_FEUILLE, f"uci:option sur le {noeud.genre} {noeud.nom}", chemin, noeud
        ))

    if noeud.genre == LISTE:
        if uci.section is None:
            diagnostics.append(_diagnostic(
                LISTE_SANS_SECTION, f"list {noeud.nom} sans uci:section", chemin, noeud
            ))
        if uci.nom_section is not None:
            diagnostics.append(_diagnostic(
                LISTE_AVEC_NOM_SECTION, f"list {noeud.nom} avec uci:section-name", chemin, noeud
            ))
        if paquet is None:
            diagnostics.append(_diagnostic(
                PAQUET_MANQUANT, f"aucun uci:package pour la list {noeud.nom}", chemin, noeud
            ))
        if uci.feuille_comme_nom is not None:
            cible = noeud.enfants.get(uci.feuille_comme_nom)
            if cible is None or cible.genre != FEUILLE:
                diagnostics.append(_diagnostic(
                    FEUILLE_NOM_INVALIDE,
                    f"{uci.feuille_comme_nom!r} n'est pas une leaf de la list {noeud.nom}",
                    chemin, noeud
                ))
    else:
        if uci.feuille_comme_nom is not None:
            diagnostics.append(_diagnostic(
                FEUILLE_NOM_HORS_LISTE, f"uci:leaf-as-name sur le container {noeud.nom}", chemin, noeud
            ))
        if uci.nom_section is not None and section is None:
            diagnostics.append(_diagnostic(
                SECTION_MANQUANTE, f"uci:section-name sans uci:section sur {noeud.nom}", chemin, noeud
            ))

    portee_enfants = Portee(
        paquet=paquet,
        section=section,
        dans_liste=noeud.nom if noeud.genre == LISTE else portee.dans_liste,
    )
    for enfant in noeud.enfants.values():
        _verifier_noeud(enfant, portee_enfants, f"{chemin}/{enfant.nom}", diagnostics)


def _controler_paquet(noeud: NoeudJin, chemin: str, diagnostics: List[Diagnostic]):
    if MOTIF_PAQUET.fullmatch(noeud.uci.paquet or "") is None:
        diagnostics.append(_diagnostic(
            IDENTIFIANT_UCI_INVALIDE, f"nom de paquet invalide : {noeud.uci.paquet!r}", chemin, noeud
        ))


def _diagnostic(code: str, message: str, chemin: str, noeud: NoeudJin) -> Diagnostic:
    return Diagnostic(code=code, message=message, chemin=chemin, ligne=noeud.ligne)
