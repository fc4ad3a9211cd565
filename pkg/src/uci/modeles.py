"""
Structures du Format UCI
========================

Forme en mémoire d'un paquet UCI : sections ordonnées contenant
des options et des listes, plus le chemin d'adressage utilisé par
le magasin et par l'aplatissement JSON.
"""

import re
from dataclasses import dataclass, field
from typing import List, Optional

# Identifiants UCI : options et noms de section ; les types de section acceptent aussi '-'
MOTIF_IDENTIFIANT = re.compile(r"[A-Za-z0-9_]+")
MOTIF_TYPE_SECTION = re.compile(r"[A-Za-z0-9_-]+")
MOTIF_PAQUET = re.compile(r"[A-Za-z0-9_-]+")

OPTION = "option"
LISTE = "list"
CONTENEUR = "container"


def est_identifiant(texte: Optional[str]) -> bool:
    return bool(texte) and MOTIF_IDENTIFIANT.fullmatch(texte) is not None


def est_type_section(texte: Optional[str]) -> bool:
    return bool(texte) and MOTIF_TYPE_SECTION.fullmatch(texte) is not None


@dataclass
class EntreeUci:
    """Une ligne `option` ou `list` d'une section."""
    genre: str
    nom: str
    valeur: str


@dataclass
class SectionUci:
    """
    Section `config <type> [<nom>]`.

    Une section anonyme n'a pas de nom ; son adresse stable est son
    rang parmi les sections du même type.
    """
    type_section: str
    nom: Optional[str] = None
    entrees: List[EntreeUci] = field(default_factory=list)

    def entrees_nommees(self, nom: str) -> List[EntreeUci]:
        return [e for e in self.entrees if e.nom == nom]

    def definir_option(self, nom: str, valeur: str):
        """Écrit une option ; remplace sur place toute entrée du même nom."""
        for position, entree in enumerate(self.entrees):
            if entree.nom == nom:
                self.entrees[position] = EntreeUci(OPTION, nom, valeur)
                self.entrees[position + 1:] = [
                    e for e in self.entrees[position + 1:] if e.nom != nom
                ]
                return
        self.entrees.append(EntreeUci(OPTION, nom, valeur))

    def ajouter_valeur_liste(self, nom: str, valeur: str):
        """Ajoute une valeur de liste ; une option du même nom devient liste."""
        for entree in self.entrees:
            if entree.nom == nom and entree.genre == OPTION:
                entree.genre = LISTE
        self.entrees.append(EntreeUci(LISTE, nom, valeur))

    def retirer_entrees(self, nom: str) -> int:
        avant = len(self.entrees)
        self.entrees = [e for e in self.entrees if e.nom != nom]
        return avant - len(self.entrees)


@dataclass
class DocumentUci:
    """Un paquet UCI : un fichier de /etc/config."""
    nom_paquet: str
    sections: List[SectionUci] = field(default_factory=list)

    def sections_du_type(self, type_section: str) -> List[SectionUci]:
        return [s for s in self.sections if s.type_section == type_section]

    def section_nommee(self, type_section: str, nom: str) -> Optional[SectionUci]:
        for section in self.sections:
            if section.nom == nom and section.type_section == type_section:
                return section
        return None

    def section_indexee(self, type_section: str, index: int) -> Optional[SectionUci]:
        candidates = self.sections_du_type(type_section)
        if 0 <= index < len(candidates):
            return candidates[index]
        return None


@dataclass(frozen=True)
class CheminUci:
    """
    Adresse résolue dans le magasin.

    La section est désignée par son nom ou par son index parmi les
    sections du même type ; sans l'un ni l'autre, le chemin désigne le
    type de section entier. `ascendance` n'est qu'un contexte d'affichage
    (la section englobante d'une liste) et n'entre pas dans l'égalité.
    """
    paquet: str
    type_section: Optional[str] = None
    nom_section: Optional[str] = None
    index: Optional[int] = None
    option: Optional[str] = None
    ascendance: Optional[str] = field(default=None, compare=False)

    @property
    def designe_section(self) -> bool:
        return self.nom_section is not None or self.index is not None

    def sans_option(self) -> "CheminUci":
        return CheminUci(self.paquet, self.type_section, self.nom_section,
                         self.index, None, self.ascendance)

    def avec_option(self, option: str) -> "CheminUci":
        return CheminUci(self.paquet, self.type_section, self.nom_section,
                         self.index, option, self.ascendance)

    def texte_section(self) -> str:
        if self.nom_section is not None:
            return self.nom_section
        if self.index is not None:
            return f"@{self.type_section}[{self.index}]"
        return f"@{self.type_section}"

    def texte(self) -> str:
        """Forme pointée : example.device.@interfaces[0].name"""
        morceaux = [self.paquet]
        if self.ascendance:
            morceaux.append(self.ascendance)
        if self.type_section is not None:
            morceaux.append(self.texte_section())
        if self.option:
            morceaux.append(self.option)
        return ".".join(morceaux)

    def __str__(self) -> str:
        return self.texte()


@dataclass(frozen=True)
class EntreeAplatie:
    """
    Triplet (chemin UCI, genre, valeur) issu de l'aplatissement d'un corps JSON.

    genre CONTENEUR => pas de valeur ; OPTION ou LISTE => valeur présente.
    """
    chemin: CheminUci
    genre: str
    valeur: Optional[str] = None

    def __str__(self) -> str:
        texte = f'"{self.chemin.texte()}", {self.genre}'
        if self.valeur is not None:
            texte += f', "{self.valeur}"'
        return texte


@dataclass(frozen=True)
class ValeurUnique:
    """Résultat de lecture d'une option."""
    texte: str


@dataclass(frozen=True)
class ValeurMultiple:
    """Résultat de lecture d'une liste, dans l'ordre du fichier."""
    textes: List[str]
