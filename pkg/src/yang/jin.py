"""
Format JIN
==========

Rendu JSON d'un module YANG annoté, produit hors ligne par yang2jin
et relu à chaque requête. Les typedefs (locaux et importés) sont
résolus à la conversion et rangés dans une table "typedefs" ; une
feuille dont le type porte des restrictions en ligne reçoit en plus
son type résolu sous "type-spec".
"""

import copy
import json
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import regex
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.coeur.erreurs import ErreurAnnotation, ErreurFormatJin, ErreurSyntaxeYang, TypeInconnu
from src.coeur.journalisation import journaliseur
from src.yang.annotations import completer_noms_section, verifier_annotations
from src.yang.modeles import (
    CONTENEUR,
    FEUILLE,
    GENRES_FEUILLES,
    LISTE,
    LISTE_FEUILLES,
    MODULE,
    AnnotationsUci,
    ModuleYang,
    NoeudJin,
    SpecType,
)
from src.yang.types_yang import (
    NUMERIQUES,
    TYPES_PREDEFINIS,
    appliquer_restrictions,
    resoudre_type,
    verifier_completude,
)

CLES_ANNOTATIONS = (
    ("package", "paquet"),
    ("section", "section"),
    ("section-name", "nom_section"),
    ("option", "option"),
    ("leaf-as-name", "feuille_comme_nom"),
)


# ═══════════════════════════════════════════════════════════
# SCHÉMA DU DOCUMENT (pydantic)
# ═══════════════════════════════════════════════════════════

class DocumentType(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True, strict=True)

    base: str
    patterns: List[str] = []
    range: Optional[List[Tuple[str, str]]] = None
    length: Optional[List[Tuple[str, str]]] = None
    enums: List[str] = []
    fraction_digits: Optional[int] = Field(None, alias="fraction-digits")


class DocumentNoeud(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True, strict=True)

    type: str
    package: Optional[str] = None
    section: Optional[str] = None
    section_name: Optional[str] = Field(None, alias="section-name")
    option: Optional[str] = None
    leaf_as_name: Optional[str] = Field(None, alias="leaf-as-name")
    map: Optional[Dict[str, "DocumentNoeud"]] = None
    leaf_type: Optional[str] = Field(None, alias="leaf-type")
    type_spec: Optional[DocumentType] = Field(None, alias="type-spec")
    keys: Optional[List[str]] = None
    unique: Optional[List[List[str]]] = None
    mandatory: Optional[bool] = None


class DocumentModule(DocumentNoeud):
    name: Optional[str] = None
    namespace: Optional[str] = None
    prefix: Optional[str] = None
    typedefs: Dict[str, DocumentType] = {}


DocumentNoeud.model_rebuild()
DocumentModule.model_rebuild()


# ═══════════════════════════════════════════════════════════
# NORMALISATION (modèle d'exécution)
# ═══════════════════════════════════════════════════════════

def est_predefini(nom_type: str) -> bool:
    return ":" not in nom_type and nom_type in TYPES_PREDEFINIS


def normaliser_module(
    module: ModuleYang,
    ensemble: Optional[Dict[str, ModuleYang]] = None
) -> ModuleYang:
    """
    Modèle d'exécution d'un module analysé : types résolus, imports
    et définitions brutes écartés. C'est exactement ce que charger_jin
    reconstruit depuis le document produit par yang_vers_jin.

    Raises:
        TypeInconnu: référence de type introuvable
        ErreurSyntaxeYang: restriction incompatible avec la base
    """
    ensemble = dict(ensemble or {})
    ensemble.setdefault(module.nom, module)

    types: Dict[str, SpecType] = {}
    for nom, definition in module.typedefs.items():
        spec = resoudre_type(ensemble, nom, module)
        verifier_completude(spec, definition.ligne)
        types[nom] = spec

    racine = copy.deepcopy(module.racine)

    def parcourir(noeud: NoeudJin):
        if noeud.est_feuille:
            definition = noeud.definition_type
            reference = definition.nom_base
            spec = resoudre_type(ensemble, reference, module)
            if not est_predefini(reference):
                types.setdefault(reference, spec)
            if definition.a_restrictions:
                spec = appliquer_restrictions(spec, definition)
                noeud.type_spec = spec
            verifier_completude(spec, definition.ligne)
            noeud.type_ref = reference
            noeud.definition_type = None
            return
        for enfant in noeud.enfants.values():
            parcourir(enfant)

    parcourir(racine)

    return ModuleYang(
        nom=module.nom,
        espace_noms=module.espace_noms,
        prefixe=module.prefixe,
        types=types,
        racine=racine,
    )


def spec_de(module: ModuleYang, noeud: NoeudJin) -> SpecType:
    """Type résolu d'une feuille d'un modèle d'exécution."""
    if noeud.type_spec is not None:
        return noeud.type_spec
    if noeud.type_ref in module.types:
        return module.types[noeud.type_ref]
    if noeud.type_ref and est_predefini(noeud.type_ref):
        return SpecType(base=noeud.type_ref)
    raise TypeInconnu(str(noeud.type_ref))


# ═══════════════════════════════════════════════════════════
# YANG -> JIN
# ═══════════════════════════════════════════════════════════

def yang_vers_jin(module: ModuleYang, ensemble: Optional[Dict[str, ModuleYang]] = None) -> str:
    """
    Convertit un module analysé en document JIN.

    Args:
        module: Module issu d'analyser_yang
        ensemble: Modules importables, par nom

    Returns:
        Texte JSON du document

    Raises:
        ErreurAnnotation: le module enfreint une règle d'annotation
    """
    diagnostics = verifier_annotations(module)
    if diagnostics:
        raise ErreurAnnotation(diagnostics)

    execution = normaliser_module(module, ensemble)

    document: Dict[str, Any] = {"type": MODULE, "name": execution.nom}
    if execution.espace_noms:
        document["namespace"] = execution.espace_noms
    if execution.prefixe:
        document["prefix"] = execution.prefixe
    document.update(_noeud_en_dictionnaire(execution.racine))
    document["typedefs"] = {nom: _spec_en_dictionnaire(spec) for nom, spec in execution.types.items()}

    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def _noeud_en_dictionnaire(noeud: NoeudJin) -> Dict[str, Any]:
    resultat: Dict[str, Any] = {"type": noeud.genre}
    for cle, attribut in CLES_ANNOTATIONS:
        valeur = getattr(noeud.uci, attribut)
        if valeur is not None:
            resultat[cle] = valeur

    if noeud.est_feuille:
        resultat["leaf-type"] = noeud.type_ref
        if noeud.type_spec is not None:
            resultat["type-spec"] = _spec_en_dictionnaire(noeud.type_spec)
        if noeud.obligatoire:
            resultat["mandatory"] = True
        return resultat

    if noeud.genre == LISTE:
        resultat["keys"] = list(noeud.cles)
        if noeud.uniques:
            resultat["unique"] = [list(groupe) for groupe in noeud.uniques]
    resultat["map"] = {nom: _noeud_en_dictionnaire(e) for nom, e in noeud.enfants.items()}
    return resultat


def _spec_en_dictionnaire(spec: SpecType) -> Dict[str, Any]:
    resultat: Dict[str, Any] = {"base": spec.base}
    if spec.motifs:
        resultat["patterns"] = list(spec.motifs)
    if spec.plage is not None:
        resultat["range"] = [[str(bas), str(haut)] for bas, haut in spec.plage]
    if spec.longueur is not None:
        resultat["length"] = [[str(bas), str(haut)] for bas, haut in spec.longueur]
    if spec.enums:
        resultat["enums"] = list(spec.enums)
    if spec.chiffres_fraction is not None:
        resultat["fraction-digits"] = spec.chiffres_fraction
    return resultat


# ═══════════════════════════════════════════════════════════
# JIN -> MODÈLE D'EXÉCUTION
# ═══════════════════════════════════════════════════════════

def charger_jin(texte: Union[str, bytes], nom_module: Optional[str] = None) -> ModuleYang:
    """
    Reconstruit un modèle d'exécution depuis un document JIN.

    Args:
        texte: Document JSON
        nom_module: Nom de repli si le document n'a pas de clé "name"

    Returns:
        Modèle avec table de types résolus

    Raises:
        ErreurFormatJin: clé manquante, mal typée ou incohérente
        ErreurAnnotation: les annotations enfreignent une règle
    """
    try:
        document = DocumentModule.model_validate_json(texte)
    except ValidationError as e:
        erreur = e.errors()[0]
        chemin = "/" + "/".join(str(morceau) for morceau in erreur["loc"])
        raise ErreurFormatJin(chemin, erreur["msg"])

    if document.type != MODULE:
        raise ErreurFormatJin("/type", f"'module' attendu, trouvé {document.type!r}")

    nom = document.name or nom_module
    if not nom:
        raise ErreurFormatJin("/name", "nom de module absent")

    types = {
        nom_type: _vers_spec(spec, f"/typedefs/{nom_type}")
        for nom_type, spec in document.typedefs.items()
    }
    module = ModuleYang(
        nom=nom,
        espace_noms=document.namespace or "",
        prefixe=document.prefix or "",
        types=types,
        racine=_vers_noeud(document, nom, MODULE, ""),
    )
    completer_noms_section(module.racine)

    _verifier_types(module, module.racine, "")

    diagnostics = verifier_annotations(module)
    if diagnostics:
        raise ErreurAnnotation(diagnostics)

    return module


def _vers_noeud(document: DocumentNoeud, nom: str, genre: str, chemin: str) -> NoeudJin:
    uci = AnnotationsUci(**{
        attribut: getattr(document, cle.replace("-", "_"))
        for cle, attribut in CLES_ANNOTATIONS
    })
    noeud = NoeudJin(genre=genre, nom=nom, uci=uci)

    def interdit(cle: str, present: bool):
        if present:
            raise ErreurFormatJin(f"{chemin}/{cle}", f"clé non permise pour un nœud {genre}")

    if genre in GENRES_FEUILLES:
        if document.leaf_type is None:
            raise ErreurFormatJin(f"{chemin}/leaf-type", "clé requise absente")
        interdit("map", document.map is not None)
        interdit("keys", document.keys is not None)
        interdit("unique", document.unique is not None)
        interdit("mandatory", genre == LISTE_FEUILLES and document.mandatory is not None)
        noeud.type_ref = document.leaf_type
        if document.type_spec is not None:
            noeud.type_spec = _vers_spec(document.type_spec, f"{chemin}/type-spec")
        noeud.obligatoire = bool(document.mandatory)
        return noeud

    if document.map is None:
        raise ErreurFormatJin(f"{chemin}/map", "clé requise absente")
    interdit("leaf-type", document.leaf_type is not None)
    interdit("type-spec", document.type_spec is not None)
    interdit("mandatory", document.mandatory is not None)
    if genre != LISTE:
        interdit("keys", document.keys is not None)
        interdit("unique", document.unique is not None)

    for nom_enfant, enfant in document.map.items():
        chemin_enfant = f"{chemin}/map/{nom_enfant}"
        if enfant.type not in (CONTENEUR, LISTE, FEUILLE, LISTE_FEUILLES):
            raise ErreurFormatJin(f"{chemin_enfant}/type", f"genre de nœud inconnu : {enfant.type!r}")
        noeud.enfants[nom_enfant] = _vers_noeud(enfant, nom_enfant, enfant.type, chemin_enfant)

    if genre == LISTE:
        if not document.keys:
            raise ErreurFormatJin(f"{chemin}/keys", "clé requise absente")
        noeud.cles = list(document.keys)
        noeud.uniques = [list(groupe) for groupe in document.unique or []]
        for position, nom_cle in enumerate(noeud.cles):
            _exiger_feuille(noeud, nom_cle, f"{chemin}/keys/{position}")
        for position, groupe in enumerate(noeud.uniques):
            for nom_feuille in groupe:
                _exiger_feuille(noeud, nom_feuille, f"{chemin}/unique/{position}")

    return noeud


def _exiger_feuille(liste: NoeudJin, nom: str, chemin: str):
    enfant = liste.enfants.get(nom)
    if enfant is None or enfant.genre != FEUILLE:
        raise ErreurFormatJin(chemin, f"{nom!r} n'est pas une leaf de la list {liste.nom}")


def _vers_spec(document: DocumentType, chemin: str) -> SpecType:
    base = document.base
    if base not in TYPES_PREDEFINIS:
        raise ErreurFormatJin(f"{chemin}/base", f"base inconnue : {base!r}")

    def permis(cle: str, present: bool, condition: bool):
        if present and not condition:
            raise ErreurFormatJin(f"{chemin}/{cle}", f"restriction non permise pour la base {base}")

    permis("patterns", bool(document.patterns), base == "string")
    permis("length", document.length is not None, base == "string")
    permis("range", document.range is not None, base in NUMERIQUES)
    permis("enums", bool(document.enums), base == "enumeration")
    permis("fraction-digits", document.fraction_digits is not None, base == "decimal64")

    for position, motif in enumerate(document.patterns):
        try:
            regex.compile(motif)
        except regex.error as e:
            raise ErreurFormatJin(f"{chemin}/patterns/{position}", f"motif invalide : {e}")

    spec = SpecType(
        base=base,
        motifs=list(document.patterns),
        plage=_intervalles(document.range, f"{chemin}/range"),
        longueur=_intervalles(document.length, f"{chemin}/length"),
        enums=list(document.enums),
        chiffres_fraction=document.fraction_digits,
    )
    try:
        verifier_completude(spec)
    except ErreurSyntaxeYang as e:
        raise ErreurFormatJin(chemin, e.raison)
    return spec


def _intervalles(
    paires: Optional[List[Tuple[str, str]]],
    chemin: str
) -> Optional[List[Tuple[Decimal, Decimal]]]:
    if paires is None:
        return None
    resultat = []
    for position, (bas, haut) in enumerate(paires):
        try:
            intervalle = (Decimal(bas), Decimal(haut))
        except InvalidOperation:
            raise ErreurFormatJin(f"{chemin}/{position}", "borne non numérique")
        if not all(b.is_finite() for b in intervalle) or intervalle[0] > intervalle[1]:
            raise ErreurFormatJin(f"{chemin}/{position}", "intervalle invalide")
        resultat.append(intervalle)
    return resultat


def _verifier_types(module: ModuleYang, noeud: NoeudJin, chemin: str):
    if noeud.est_feuille:
        try:
            spec_de(module, noeud)
        except TypeInconnu as e:
            raise ErreurFormatJin(f"{chemin}/leaf-type", e.message)
        return
    for nom, enfant in noeud.enfants.items():
        _verifier_types(module, enfant, f"{chemin}/map/{nom}")


# ═══════════════════════════════════════════════════════════
# RÉPERTOIRE DE MODÈLES
# ═══════════════════════════════════════════════════════════

def charger_modeles(repertoire: Union[str, Path]) -> Dict[str, ModuleYang]:
    """
    Charge tous les fichiers *.json d'un répertoire, par nom de module.

    Raises:
        ErreurFormatJin / ErreurAnnotation: premier fichier invalide
    """
    modeles: Dict[str, ModuleYang] = {}
    for fichier in sorted(Path(repertoire).glob("*.json")):
        try:
            module = charger_jin(fichier.read_bytes(), nom_module=fichier.stem)
        except (ErreurFormatJin, ErreurAnnotation) as e:
            journaliseur.erreur(f"Modèle {fichier.name} invalide : {e}")
            raise
        if module.nom in modeles:
            journaliseur.avertissement(f"Module {module.nom} déjà chargé, {fichier.name} ignoré")
            continue
        modeles[module.nom] = module

    journaliseur.debug(f"{len(modeles)} modèle(s) chargé(s) depuis {repertoire}")
    return modeles
