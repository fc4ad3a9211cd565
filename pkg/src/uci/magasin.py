"""
Magasin de Configuration UCI
============================

Répertoire de paquets UCI (un fichier par paquet, sans extension).
Un seul écrivain à la fois (fichier verrou dans le répertoire),
lecteurs sans verrou : chaque commit réécrit le fichier complet
dans un fichier temporaire puis le renomme, si bien qu'un lecteur
ne voit jamais qu'un fichier entièrement validé.
"""

import os
import tempfile
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, TypeVar, Union

from filelock import FileLock, Timeout

from src.coeur.erreurs import (
    CheminAmbigu,
    ConflitEcriture,
    DelaiVerrouDepasse,
    ElementIntrouvable,
    ErreurEntreeSortieMagasin,
    ValeurNonSupportee,
)
from src.coeur.journalisation import journaliseur
from src.uci.analyseur_uci import analyser_uci, serialiser_uci
from src.uci.modeles import (
    CONTENEUR,
    LISTE,
    MOTIF_PAQUET,
    OPTION,
    CheminUci,
    DocumentUci,
    EntreeAplatie,
    SectionUci,
    ValeurMultiple,
    ValeurUnique,
    est_identifiant,
    est_type_section,
)

CREATION = "create"
REMPLACEMENT = "replace"
AJOUT = "append"

T = TypeVar("T")
ValeurLue = Optional[Union[ValeurUnique, ValeurMultiple]]


@dataclass
class RapportCommit:
    """Bilan d'un appel à appliquer_changements."""
    paquets: List[str] = field(default_factory=list)
    sections_creees: int = 0
    entrees_ecrites: int = 0
    entrees_purgees: int = 0

    @property
    def vide(self) -> bool:
        return not self.paquets


# ═══════════════════════════════════════════════════════════
# RÉSOLUTION SUR UN DOCUMENT
# ═══════════════════════════════════════════════════════════

def resoudre_section(document: DocumentUci, chemin: CheminUci) -> Optional[SectionUci]:
    """
    Retrouve la section désignée par nom ou par index.

    Raises:
        CheminAmbigu: si le chemin ne porte ni nom ni index
    """
    if chemin.nom_section is not None:
        return document.section_nommee(chemin.type_section, chemin.nom_section)
    if chemin.index is not None:
        return document.section_indexee(chemin.type_section, chemin.index)
    raise CheminAmbigu(f"ni nom ni index pour la section de {chemin.texte()}", chemin.texte())


def lire_dans_document(document: DocumentUci, chemin: CheminUci) -> ValeurLue:
    if not chemin.option:
        raise CheminAmbigu(f"option absente du chemin {chemin.texte()}", chemin.texte())

    section = resoudre_section(document, chemin)
    if section is None:
        return None

    entrees = section.entrees_nommees(chemin.option)
    if not entrees:
        return None
    if entrees[0].genre == OPTION:
        return ValeurUnique(entrees[-1].valeur)
    return ValeurMultiple([e.valeur for e in entrees])


class VueLecture:
    """
    Instantané de lecture : chaque paquet est analysé au plus une fois.
    Sert pendant un échange RESTCONF (GET, vérifications).
    """

    def __init__(self, magasin: "MagasinUci"):
        self._magasin = magasin
        self._documents: Dict[str, DocumentUci] = {}

    def document(self, paquet: str) -> DocumentUci:
        if paquet not in self._documents:
            self._documents[paquet] = self._magasin.charger(paquet)
        return self._documents[paquet]

    def compter_sections(self, paquet: str, type_section: str) -> int:
        return len(self.document(paquet).sections_du_type(type_section))

    def lire_valeur(self, chemin: CheminUci) -> ValeurLue:
        return lire_dans_document(self.document(chemin.paquet), chemin)

    def section_existe(self, chemin: CheminUci) -> bool:
        return resoudre_section(self.document(chemin.paquet), chemin) is not None


class MagasinUci:
    """
    Accès au répertoire des paquets UCI.
    """

    def __init__(
        self,
        repertoire: Union[str, Path],
        delai_verrou: float = 5.0,
        nom_fichier_verrou: str = ".orc.lock"
    ):
        """
        Args:
            repertoire: Racine du magasin (/etc/config en déploiement)
            delai_verrou: Attente maximale du verrou d'écriture, en secondes
            nom_fichier_verrou: Fichier verrou créé dans la racine
        """
        self.repertoire = Path(repertoire)
        self.delai_verrou = delai_verrou
        self.fichier_verrou = self.repertoire / nom_fichier_verrou
        self._verrou = FileLock(str(self.fichier_verrou), timeout=delai_verrou)

    # ─────────────────────────────────────────────────────────
    # LECTURE
    # ─────────────────────────────────────────────────────────

    def chemin_paquet(self, paquet: str) -> Path:
        if not paquet or MOTIF_PAQUET.fullmatch(paquet) is None:
            raise ValeurNonSupportee(f"nom de paquet invalide : {paquet!r}")
        return self.repertoire / paquet

    def charger(self, paquet: str) -> DocumentUci:
        """
        Lit un paquet ; un fichier absent vaut un paquet vide.

        Raises:
            ErreurEntreeSortieMagasin: fichier illisible
            ErreurSyntaxeUci: contenu mal formé
        """
        fichier = self.chemin_paquet(paquet)
        try:
            texte = fichier.read_text(encoding="utf-8")
        except FileNotFoundError:
            return DocumentUci(paquet)
        except (OSError, UnicodeDecodeError) as e:
            raise ErreurEntreeSortieMagasin(f"lecture de {fichier} impossible : {e}")
        return analyser_uci(texte, paquet)

    def vue(self) -> VueLecture:
        return VueLecture(self)

    def compter_sections(self, paquet: str, type_section: str) -> int:
        """Nombre de sections (nommées ou anonymes) du type donné."""
        return len(self.charger(paquet).sections_du_type(type_section))

    def lire_valeur(self, chemin: CheminUci) -> ValeurLue:
        """
        Lit une option (ValeurUnique) ou une liste (ValeurMultiple).

        Returns:
            None si la section ou l'entrée n'existe pas
        """
        return lire_dans_document(self.charger(chemin.paquet), chemin)

    # ─────────────────────────────────────────────────────────
    # VERROU
    # ─────────────────────────────────────────────────────────

    @contextmanager
    def verrou_ecriture(self) -> Iterator["MagasinUci"]:
        """
        Verrou consultatif exclusif sur le répertoire du magasin (réentrant).

        Raises:
            DelaiVerrouDepasse: verrou non obtenu dans le délai configuré
        """
        try:
            self.repertoire.mkdir(parents=True, exist_ok=True)
            self._verrou.acquire(timeout=self.delai_verrou)
        except Timeout:
            raise DelaiVerrouDepasse(
                f"verrou {self.fichier_verrou} non obtenu en {self.delai_verrou}s"
            )
        except OSError as e:
            raise ErreurEntreeSortieMagasin(f"verrou {self.fichier_verrou} : {e}")

        try:
            yield self
        finally:
            self._verrou.release()

    def avec_verrou_ecriture(self, action: Callable[[], T]) -> T:
        with self.verrou_ecriture():
            return action()

    # ─────────────────────────────────────────────────────────
    # ÉCRITURE
    # ─────────────────────────────────────────────────────────

    def appliquer_changements(
        self,
        entrees: Iterable[EntreeAplatie],
        mode: str = CREATION,
        purges: Sequence[CheminUci] = ()
    ) -> RapportCommit:
        """
        Écrit une suite de triplets aplatis (parent avant enfant).

        Args:
            entrees: Triplets conteneur / option / liste
            mode: CREATION (ou AJOUT) refuse l'existant ; REMPLACEMENT purge d'abord
            purges: Chemins du sous-arbre ciblé, vidés avant écriture en REMPLACEMENT

        Returns:
            Rapport du commit (vide si rien à écrire)

        Raises:
            ConflitEcriture: section nommée ou option déjà présente en création
            ValeurNonSupportee: valeur ou identifiant non représentable
        """
        entrees = list(entrees)
        remplacement = mode == REMPLACEMENT
        if not entrees and not (remplacement and purges):
            return RapportCommit()

        with self.verrou_ecriture():
            documents: Dict[str, DocumentUci] = {}
            rapport = RapportCommit()

            def document(paquet: str) -> DocumentUci:
                if paquet not in documents:
                    documents[paquet] = self.charger(paquet)
                return documents[paquet]

            if remplacement:
                for chemin in purges:
                    rapport.entrees_purgees += _purger(document(chemin.paquet), chemin)

            creees: Set[int] = set()
            ecrites: Set[Tuple[int, str]] = set()

            for entree in entrees:
                _valider_entree(entree)
                doc = document(entree.chemin.paquet)
                section, nouvelle = _obtenir_section(doc, entree.chemin)
                if nouvelle:
                    creees.add(id(section))
                    rapport.sections_creees += 1

                if entree.genre == CONTENEUR:
                    if not remplacement and id(section) not in creees:
                        raise ConflitEcriture(
                            f"la section {entree.chemin.texte()} existe déjà",
                            entree.chemin.texte()
                        )
                    continue

                cle = (id(section), entree.chemin.option)
                if cle not in ecrites and section.entrees_nommees(entree.chemin.option):
                    if not remplacement:
                        raise ConflitEcriture(
                            f"l'entrée {entree.chemin.texte()} existe déjà",
                            entree.chemin.texte()
                        )
                    section.retirer_entrees(entree.chemin.option)

                if entree.genre == OPTION:
                    section.definir_option(entree.chemin.option, entree.valeur)
                else:
                    section.ajouter_valeur_liste(entree.chemin.option, entree.valeur)
                ecrites.add(cle)
                rapport.entrees_ecrites += 1

            for doc in documents.values():
                self._enregistrer(doc)
            rapport.paquets = sorted(documents)

        journaliseur.audit("commit", {
            "mode": mode,
            "paquets": rapport.paquets,
            "sections_creees": rapport.sections_creees,
            "entrees_ecrites": rapport.entrees_ecrites,
            "entrees_purgees": rapport.entrees_purgees,
        })
        return rapport

    def supprimer_a(self, chemin: CheminUci) -> int:
        """
        Supprime une option, une liste, une section ou toutes les sections d'un type.

        Returns:
            Nombre de sections / entrées supprimées

        Raises:
            ElementIntrouvable: rien ne correspond
        """
        return self.supprimer_plusieurs([chemin])

    def supprimer_plusieurs(self, chemins: Sequence[CheminUci]) -> int:
        """
        Supprime plusieurs chemins en un seul commit. Les cibles sont résolues
        avant toute suppression, si bien que les index anonymes restent valides.

        Raises:
            ElementIntrouvable: aucun des chemins ne correspond
        """
        with self.verrou_ecriture():
            documents: Dict[str, DocumentUci] = {}
            cibles: List[Tuple[DocumentUci, SectionUci, Optional[str]]] = []

            for chemin in chemins:
                if chemin.paquet not in documents:
                    documents[chemin.paquet] = self.charger(chemin.paquet)
                cibles.extend(_cibles_suppression(documents[chemin.paquet], chemin))

            supprimees = 0
            vues: Set[int] = set()
            modifies: Dict[str, DocumentUci] = {}
            for doc, section, option in cibles:
                if option is not None:
                    supprimees += section.retirer_entrees(option)
                elif id(section) not in vues:
                    doc.sections = [s for s in doc.sections if s is not section]
                    vues.add(id(section))
                    supprimees += 1
                modifies[doc.nom_paquet] = doc

            if supprimees == 0:
                raise ElementIntrouvable(
                    "rien à supprimer pour " + ", ".join(c.texte() for c in chemins)
                )

            for doc in modifies.values():
                self._enregistrer(doc)

        journaliseur.audit("suppression", {
            "chemins": [c.texte() for c in chemins],
            "supprimees": supprimees,
        })
        return supprimees

    def _enregistrer(self, document: DocumentUci):
        """Fichier temporaire dans le même répertoire, puis renommage atomique."""
        fichier = self.chemin_paquet(document.nom_paquet)
        contenu = serialiser_uci(document)
        temporaire = None
        try:
            descripteur, temporaire = tempfile.mkstemp(
                dir=str(self.repertoire), prefix=f".{document.nom_paquet}."
            )
            with os.fdopen(descripteur, "w", encoding="utf-8") as flux:
                flux.write(contenu)
                flux.flush()
                os.fsync(flux.fileno())
            os.replace(temporaire, fichier)
            temporaire = None
        except OSError as e:
            raise ErreurEntreeSortieMagasin(f"écriture de {fichier} impossible : {e}")
        finally:
            if temporaire is not None and os.path.exists(temporaire):
                os.unlink(temporaire)

        journaliseur.debug(f"Paquet {document.nom_paquet} écrit ({len(document.sections)} sections)")


# ═══════════════════════════════════════════════════════════
# AIDES D'ÉCRITURE
# ═══════════════════════════════════════════════════════════

def _valider_entree(entree: EntreeAplatie):
    chemin = entree.chemin
    if not est_type_section(chemin.type_section):
        raise ValeurNonSupportee(f"type de section invalide : {chemin.type_section!r}")
    if chemin.nom_section is not None and not est_identifiant(chemin.nom_section):
        raise ValeurNonSupportee(f"nom de section invalide : {chemin.nom_section!r}")
    if entree.genre == CONTENEUR:
        return
    if entree.genre not in (OPTION, LISTE):
        raise ValeurNonSupportee(f"genre d'entrée inconnu : {entree.genre!r}")
    if not est_identifiant(chemin.option):
        raise ValeurNonSupportee(f"nom d'option invalide : {chemin.option!r}")
    valeur = entree.valeur
    if not valeur:
        raise ValeurNonSupportee(f"valeur vide pour {chemin.texte()}")
    if "'" in valeur or "\n" in valeur or "\r" in valeur:
        raise ValeurNonSupportee(
            f"valeur non représentable en UCI pour {chemin.texte()} : {valeur!r}"
        )


def _obtenir_section(document: DocumentUci, chemin: CheminUci) -> Tuple[SectionUci, bool]:
    """Section désignée, créée si elle manque (nommée, ou anonyme en fin de type)."""
    if chemin.nom_section is not None:
        section = document.section_nommee(chemin.type_section, chemin.nom_section)
        if section is not None:
            return section, False
        section = SectionUci(chemin.type_section, chemin.nom_section)
        document.sections.append(section)
        return section, True

    if chemin.index is not None:
        existantes = document.sections_du_type(chemin.type_section)
        if chemin.index < len(existantes):
            return existantes[chemin.index], False
        if chemin.index == len(existantes):
            section = SectionUci(chemin.type_section)
            document.sections.append(section)
            return section, True
        raise CheminAmbigu(
            f"index {chemin.index} au-delà des {len(existantes)} sections "
            f"'{chemin.type_section}'",
            chemin.texte()
        )

    raise CheminAmbigu(f"section non désignée : {chemin.texte()}", chemin.texte())


def _purger(document: DocumentUci, chemin: CheminUci) -> int:
    """
    Vide le sous-arbre ciblé avant un remplacement. Une section unique est
    vidée sur place pour conserver son index ; un type entier est supprimé.
    """
    if chemin.option:
        section = resoudre_section(document, chemin)
        return section.retirer_entrees(chemin.option) if section else 0

    if chemin.designe_section:
        section = resoudre_section(document, chemin)
        if section is None:
            return 0
        retirees = len(section.entrees)
        section.entrees = []
        return retirees

    avant = len(document.sections)
    document.sections = [s for s in document.sections if s.type_section != chemin.type_section]
    return avant - len(document.sections)


def _cibles_suppression(
    document: DocumentUci,
    chemin: CheminUci
) -> List[Tuple[DocumentUci, SectionUci, Optional[str]]]:
    if chemin.type_section is None:
        raise CheminAmbigu(f"type de section absent : {chemin.texte()}", chemin.texte())

    if chemin.option:
        section = resoudre_section(document, chemin)
        if section is not None and section.entrees_nommees(chemin.option):
            return [(document, section, chemin.option)]
        return []

    if chemin.designe_section:
        section = resoudre_section(document, chemin)
        return [(document, section, None)] if section is not None else []

    return [(document, s, None) for s in document.sections_du_type(chemin.type_section)]
