"""
Modèle de Données YANG / JIN
============================

Arbre de nœuds (module, container, list, leaf, leaf-list) portant
les annotations UCI, tel que produit par l'analyseur YANG puis
reconstruit à l'exécution depuis un document JIN.
"""

from dataclasses import dataclass, field
from decimal import Decimal
from typing import Dict, Iterator, List, Optional, Tuple

MODULE = "module"
CONTENEUR = "container"
LISTE = "list"
FEUILLE = "leaf"
LISTE_FEUILLES = "leaf-list"

GENRES_FEUILLES = (FEUILLE, LISTE_FEUILLES)
GENRES_INTERNES = (MODULE, CONTENEUR, LISTE)

Intervalle = Tuple[Decimal, Decimal]


@dataclass
class AnnotationsUci:
    """
    Les cinq extensions de correspondance UCI.

    nom_section == "" est le marqueur « section anonyme » posé sur un
    container qui déclare une section sans nom.
    """
    paquet: Optional[str] = None
    section: Optional[str] = None
    nom_section: Optional[str] = None
    option: Optional[str] = None
    feuille_comme_nom: Optional[str] = None


@dataclass
class DefinitionType:
    """
    Instruction `type` telle qu'écrite dans la source, avant résolution.
    """
    nom_base: str
    motifs: List[str] = field(default_factory=list)
    plage: Optional[str] = None
    longueur: Optional[str] = None
    enums: List[str] = field(default_factory=list)
    chiffres_fraction: Optional[int] = None
    ligne: Optional[int] = field(default=None, compare=False)

    @property
    def a_restrictions(self) -> bool:
        return bool(
            self.motifs or self.plage or self.longueur or self.enums
            or self.chiffres_fraction is not None
        )


@dataclass
class SpecType:
    """
    Type résolu : base prédéfinie et restrictions fusionnées de toute
    la chaîne de typedefs.
    """
    base: str
    motifs: List[str] = field(default_factory=list)
    plage: Optional[List[Intervalle]] = None
    longueur: Optional[List[Intervalle]] = None
    enums: List[str] = field(default_factory=list)
    chiffres_fraction: Optional[int] = None


@dataclass
class NoeudJin:
    genre: str
    nom: str
    uci: AnnotationsUci = field(default_factory=AnnotationsUci)
    enfants: Dict[str, "NoeudJin"] = field(default_factory=dict)
    type_ref: Optional[str] = None
    definition_type: Optional[DefinitionType] = None
    type_spec: Optional[SpecType] = None
    cles: List[str] = field(default_factory=list)
    uniques: List[List[str]] = field(default_factory=list)
    obligatoire: bool = False
    ligne: Optional[int] = field(default=None, compare=False)

    @property
    def est_feuille(self) -> bool:
        return self.genre in GENRES_FEUILLES

    def feuilles(self) -> Iterator["NoeudJin"]:
        for enfant in self.enfants.values():
            if enfant.est_feuille:
                yield enfant


@dataclass
class ModuleYang:
    """
    Module YANG (sortie de l'analyseur) ou modèle d'exécution (sortie de charger_jin).

    `typedefs` garde les définitions brutes ; `types` la table résolue
    extraite dans le document JIN (typedefs locaux et importés).
    """
    nom: str
    espace_noms: str = ""
    prefixe: str = ""
    imports: List[Tuple[str, str]] = field(default_factory=list)
    typedefs: Dict[str, DefinitionType] = field(default_factory=dict)
    types: Dict[str, SpecType] = field(default_factory=dict)
    racine: NoeudJin = None
    extensions: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.racine is None:
            self.racine = NoeudJin(MODULE, self.nom)

    def module_importe(self, prefixe: str) -> Optional[str]:
        for module, pfx in self.imports:
            if pfx == prefixe:
                return module
        return None


@dataclass
class Diagnostic:
    """Violation d'une règle d'annotation, rapportée par verifier_annotations."""
    code: str
    message: str
    chemin: str
    ligne: Optional[int] = None

    def formater(self, fichier: str) -> str:
        return f"{fichier}:{self.ligne or 0}: {self.code}: {self.message}"
