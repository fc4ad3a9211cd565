"""
Contexte de Chemin UCI
======================

Objet transmis de nœud en nœud lors du parcours d'un modèle JIN :
chaque nœud peut redéfinir paquet, section et nom de section, une
entrée de liste fixe son index (ou son nom), une feuille son option.
"""

from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

from src.uci.modeles import CheminUci
from src.yang.modeles import CONTENEUR, LISTE, ModuleYang, NoeudJin


@dataclass(frozen=True)
class ContexteChemin:
    paquet: Optional[str] = None
    section: Optional[str] = None
    nom_section: Optional[str] = None
    index: Optional[int] = None
    option: Optional[str] = None
    ascendance: Optional[str] = None

    @classmethod
    def depuis_module(cls, module: ModuleYang) -> "ContexteChemin":
        uci = module.racine.uci
        return cls(paquet=uci.paquet, section=uci.section, nom_section=uci.nom_section)

    def descendre(self, noeud: NoeudJin) -> "ContexteChemin":
        """Contexte d'un enfant : ses annotations priment sur celles héritées."""
        uci = noeud.uci

        if noeud.genre == LISTE:
            return ContexteChemin(
                paquet=uci.paquet or self.paquet,
                section=uci.section,
                ascendance=self._texte_section(),
            )

        contexte = self
        if uci.paquet is not None:
            contexte = replace(contexte, paquet=uci.paquet)
        if uci.section is not None:
            contexte = replace(contexte, section=uci.section, nom_section=None, index=None)
        if uci.nom_section is not None:
            contexte = replace(contexte, nom_section=uci.nom_section, index=None)

        if noeud.est_feuille:
            return replace(contexte, option=uci.option or noeud.nom)
        return contexte

    def avec_index(self, index: int) -> "ContexteChemin":
        return replace(self, index=index, nom_section=None)

    def avec_nom(self, nom: str) -> "ContexteChemin":
        return replace(self, nom_section=nom, index=None)

    def chemin_uci(self) -> CheminUci:
        """
        Chemin UCI accumulé. Un nom de section vide désigne la première
        section anonyme du type.
        """
        nom, index = self.nom_section, self.index
        if nom == "":
            nom, index = None, 0
        return CheminUci(
            paquet=self.paquet,
            type_section=self.section,
            nom_section=nom,
            index=index,
            option=self.option,
            ascendance=self.ascendance,
        )

    def chemin_type(self) -> CheminUci:
        """Toutes les sections du type courant."""
        return CheminUci(paquet=self.paquet, type_section=self.section, ascendance=self.ascendance)

    def _texte_section(self) -> Optional[str]:
        if self.section is None:
            return None
        return self.chemin_uci().texte_section()


def declare_section(noeud: NoeudJin) -> bool:
    """Vrai si le container ouvre sa propre section UCI."""
    return noeud.genre == CONTENEUR and (
        noeud.uci.section is not None or noeud.uci.nom_section is not None
    )


@dataclass
class SegmentUri:
    """Segment d'URI décodé : nom de nœud et, pour une entrée de liste, ses clés."""
    nom: str
    cles: Optional[List[str]] = None

    @classmethod
    def depuis_texte(cls, texte: str) -> "SegmentUri":
        if "=" not in texte:
            return cls(texte)
        nom, valeurs = texte.split("=", 1)
        return cls(nom, valeurs.split(","))

    def __str__(self) -> str:
        if self.cles is None:
            return self.nom
        return f"{self.nom}={','.join(self.cles)}"


@dataclass
class CibleResolue:
    """
    Nœud visé par une URI et contexte UCI accumulé jusqu'à lui.

    `entree_liste` porte les valeurs de clé quand le dernier segment
    désigne une entrée précise ; `existe` indique alors si elle est
    présente dans le magasin.
    """
    module: ModuleYang
    noeud: NoeudJin
    contexte: ContexteChemin
    entree_liste: Optional[Tuple[str, ...]] = None
    existe: bool = True

    @property
    def est_racine_module(self) -> bool:
        return self.noeud is self.module.racine

    @property
    def est_entree_liste(self) -> bool:
        return self.entree_liste is not None

    @property
    def nom_qualifie(self) -> str:
        return f"{self.module.nom}:{self.noeud.nom}"
