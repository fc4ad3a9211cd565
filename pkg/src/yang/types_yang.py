"""
Types YANG
==========

Types prédéfinis pris en charge, bornes des bases numériques,
lecture des restrictions range/length et résolution des chaînes
de typedefs (locaux ou importés).
"""

from decimal import Decimal, InvalidOperation
from typing import Dict, FrozenSet, List, Optional

import regex

from src.coeur.erreurs import ErreurSyntaxeYang, TypeInconnu
from src.yang.modeles import DefinitionType, Intervalle, ModuleYang, SpecType

ENTIERS = {
    "int8": (-2 ** 7, 2 ** 7 - 1),
    "int16": (-2 ** 15, 2 ** 15 - 1),
    "int32": (-2 ** 31, 2 ** 31 - 1),
    "int64": (-2 ** 63, 2 ** 63 - 1),
    "uint8": (0, 2 ** 8 - 1),
    "uint16": (0, 2 ** 16 - 1),
    "uint32": (0, 2 ** 32 - 1),
    "uint64": (0, 2 ** 64 - 1),
}

# RFC 7951 : int64, uint64 et decimal64 voyagent en chaînes JSON
BASES_EN_CHAINE = {"int64", "uint64", "decimal64"}
NUMERIQUES = set(ENTIERS) | {"decimal64"}
TYPES_PREDEFINIS = NUMERIQUES | {"string", "boolean", "enumeration"}

BORNES_LONGUEUR: Intervalle = (Decimal(0), Decimal(2 ** 64 - 1))


def bornes_base(base: str, chiffres_fraction: Optional[int] = None) -> Optional[Intervalle]:
    """Intervalle des valeurs représentables par une base numérique."""
    if base in ENTIERS:
        bas, haut = ENTIERS[base]
        return Decimal(bas), Decimal(haut)
    if base == "decimal64":
        chiffres = chiffres_fraction or 1
        return Decimal(-2 ** 63).scaleb(-chiffres), Decimal(2 ** 63 - 1).scaleb(-chiffres)
    return None


def analyser_intervalles(
    texte: str,
    bornes: List[Intervalle],
    ligne: Optional[int] = None
) -> List[Intervalle]:
    """
    Lit une expression 'a..b | c | min..d'.

    Args:
        texte: Argument de range ou length
        bornes: Intervalles courants, pour interpréter min et max
        ligne: Ligne source pour les erreurs
    """
    intervalles: List[Intervalle] = []

    def valeur(jeton: str) -> Decimal:
        jeton = jeton.strip()
        if jeton in ("min", "max") and not bornes:
            raise ErreurSyntaxeYang(ligne or 0, f"{jeton} sans intervalle courant")
        if jeton == "min":
            return bornes[0][0]
        if jeton == "max":
            return bornes[-1][1]
        try:
            return Decimal(jeton)
        except InvalidOperation:
            raise ErreurSyntaxeYang(ligne or 0, f"borne invalide : {jeton!r}")

    for partie in texte.split("|"):
        if ".." in partie:
            bas_txt, haut_txt = partie.split("..", 1)
            bas, haut = valeur(bas_txt), valeur(haut_txt)
        else:
            bas = haut = valeur(partie)
        if not bas.is_finite() or not haut.is_finite() or bas > haut:
            raise ErreurSyntaxeYang(ligne or 0, f"intervalle invalide : {partie.strip()!r}")
        intervalles.append((bas, haut))

    return intervalles


def intersection(a: List[Intervalle], b: List[Intervalle]) -> List[Intervalle]:
    resultat = []
    for bas_a, haut_a in a:
        for bas_b, haut_b in b:
            bas, haut = max(bas_a, bas_b), min(haut_a, haut_b)
            if bas <= haut:
                resultat.append((bas, haut))
    return sorted(resultat)


def dans_intervalles(valeur: Decimal, intervalles: List[Intervalle]) -> bool:
    return any(bas <= valeur <= haut for bas, haut in intervalles)


def appliquer_restrictions(spec: SpecType, definition: DefinitionType) -> SpecType:
    """
    Ajoute les restrictions d'une instruction `type` à un type déjà résolu.
    Les restrictions d'une chaîne s'appliquent toutes : motifs cumulés,
    intervalles intersectés.
    """
    ligne = definition.ligne or 0
    resultat = SpecType(
        base=spec.base,
        motifs=list(spec.motifs),
        plage=list(spec.plage) if spec.plage is not None else None,
        longueur=list(spec.longueur) if spec.longueur is not None else None,
        enums=list(spec.enums),
        chiffres_fraction=spec.chiffres_fraction,
    )

    if definition.chiffres_fraction is not None:
        if spec.base != "decimal64" or spec.chiffres_fraction is not None:
            raise ErreurSyntaxeYang(ligne, "fraction-digits réservé à la base decimal64")
        if not 1 <= definition.chiffres_fraction <= 18:
            raise ErreurSyntaxeYang(ligne, "fraction-digits hors de 1..18")
        resultat.chiffres_fraction = definition.chiffres_fraction

    if definition.motifs:
        if spec.base != "string":
            raise ErreurSyntaxeYang(ligne, "pattern réservé à la base string")
        for motif in definition.motifs:
            try:
                regex.compile(motif)
            except regex.error as e:
                raise ErreurSyntaxeYang(ligne, f"motif invalide {motif!r} : {e}")
        resultat.motifs.extend(definition.motifs)

    if definition.longueur is not None:
        if spec.base != "string":
            raise ErreurSyntaxeYang(ligne, "length réservé à la base string")
        courants = resultat.longueur if resultat.longueur is not None else [BORNES_LONGUEUR]
        nouveaux = analyser_intervalles(definition.longueur, courants, ligne)
        resultat.longueur = intersection(courants, nouveaux) if resultat.longueur is not None else nouveaux

    if definition.plage is not None:
        if spec.base not in NUMERIQUES:
            raise ErreurSyntaxeYang(ligne, "range réservé aux bases numériques")
        courants = (
            resultat.plage if resultat.plage is not None
            else [bornes_base(spec.base, resultat.chiffres_fraction)]
        )
        nouveaux = analyser_intervalles(definition.plage, courants, ligne)
        resultat.plage = intersection(courants, nouveaux) if resultat.plage is not None else nouveaux

    if definition.enums:
        if spec.base != "enumeration":
            raise ErreurSyntaxeYang(ligne, "enum réservé à la base enumeration")
        if spec.enums and not set(definition.enums) <= set(spec.enums):
            raise ErreurSyntaxeYang(ligne, "une restriction d'enumeration ne peut ajouter de valeur")
        resultat.enums = list(definition.enums)

    return resultat


def verifier_completude(spec: SpecType, ligne: Optional[int] = None):
    """Une enumeration doit lister ses valeurs, un decimal64 ses chiffres."""
    if spec.base == "enumeration" and not spec.enums:
        raise ErreurSyntaxeYang(ligne or 0, "enumeration sans enum")
    if spec.base == "decimal64" and spec.chiffres_fraction is None:
        raise ErreurSyntaxeYang(ligne or 0, "decimal64 sans fraction-digits")


def resoudre_type(
    ensemble: Dict[str, ModuleYang],
    nom_type: str,
    module: ModuleYang
) -> SpecType:
    """
    Résout un nom de type dans le contexte de préfixes d'un module.

    Args:
        ensemble: Modules disponibles, par nom (pour les imports)
        nom_type: Nom éventuellement préfixé ('percent', 'et:percent', 'uint8')
        module: Module dont les préfixes s'appliquent

    Returns:
        Type résolu (base + restrictions fusionnées)

    Raises:
        TypeInconnu: type ni prédéfini ni déclaré
    """
    return _resoudre(ensemble, nom_type, module, frozenset())


def _resoudre(
    ensemble: Dict[str, ModuleYang],
    nom_type: str,
    module: ModuleYang,
    vus: FrozenSet[str]
) -> SpecType:
    prefixe, _, nom = nom_type.rpartition(":")
    cible = module
    if prefixe and prefixe != module.prefixe:
        nom_module = module.module_importe(prefixe)
        if nom_module is None or nom_module not in ensemble:
            raise TypeInconnu(nom_type)
        cible = ensemble[nom_module]

    if not prefixe and nom in TYPES_PREDEFINIS:
        return SpecType(base=nom)

    cle = f"{cible.nom}:{nom}"
    if cle in vus:
        raise TypeInconnu(f"{nom_type} (définition circulaire)")

    definition = cible.typedefs.get(nom)
    if definition is None:
        raise TypeInconnu(nom_type)

    base = _resoudre(ensemble, definition.nom_base, cible, vus | {cle})
    return appliquer_restrictions(base, definition)
