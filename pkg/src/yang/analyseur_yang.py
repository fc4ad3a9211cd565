"""
Analyseur YANG (sous-ensemble annoté UCI)
=========================================

Trois étapes :
1. découpage en jetons (chaînes citées, concaténation '+', commentaires)
2. arbre d'instructions générique `mot-clé [argument] ; | { ... }`
3. construction du ModuleYang : nœuds, typedefs, imports et
   annotations uci:package / section / section-name / option / leaf-as-name

Toute entrée, même arbitraire, produit un module ou une ErreurSyntaxeYang.
"""

import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from src.coeur.erreurs import ErreurSyntaxeYang, InstructionNonSupportee
from src.yang.annotations import completer_noms_section
from src.yang.modeles import (
    CONTENEUR,
    FEUILLE,
    LISTE,
    LISTE_FEUILLES,
    AnnotationsUci,
    DefinitionType,
    ModuleYang,
    NoeudJin,
)

MODULE_EXTENSIONS = "uci-extensions"
ANNOTATIONS = {
    "package": "paquet",
    "section": "section",
    "section-name": "nom_section",
    "option": "option",
    "leaf-as-name": "feuille_comme_nom",
}

# Instructions acceptées puis ignorées (documentation, métadonnées)
IGNOREES = {
    "description", "reference", "organization", "contact", "revision",
    "yang-version", "units", "status", "presence", "default",
    "error-message", "error-app-tag", "revision-date", "yin-element", "value",
}

PROFONDEUR_MAX = 64

MOTIF_MOT_CLE = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*(:[A-Za-z_][A-Za-z0-9_.-]*)?")
MOTIF_IDENTIFIANT_YANG = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*")

_ECHAPPEMENTS = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}


# ═══════════════════════════════════════════════════════════
# 1. JETONS
# ═══════════════════════════════════════════════════════════

@dataclass
class Jeton:
    genre: str          # 'ponct', 'cite', 'nu'
    valeur: str
    ligne: int


def decouper(texte: str) -> List[Jeton]:
    jetons: List[Jeton] = []
    i, n, ligne = 0, len(texte), 1

    while i < n:
        c = texte[i]

        if c == "\n":
            ligne += 1
            i += 1
        elif c.isspace():
            i += 1
        elif texte.startswith("//", i):
            fin = texte.find("\n", i)
            i = n if fin < 0 else fin
        elif texte.startswith("/*", i):
            fin = texte.find("*/", i + 2)
            if fin < 0:
                raise ErreurSyntaxeYang(ligne, "commentaire non fermé")
            ligne += texte.count("\n", i, fin)
            i = fin + 2
        elif c in "{};":
            jetons.append(Jeton("ponct", c, ligne))
            i += 1
        elif c == '"':
            debut_ligne = ligne
            morceaux = []
            i += 1
            while True:
                if i >= n:
                    raise ErreurSyntaxeYang(debut_ligne, "chaîne non fermée")
                c = texte[i]
                if c == '"':
                    i += 1
                    break
                if c == "\\" and i + 1 < n:
                    suivant = texte[i + 1]
                    morceaux.append(_ECHAPPEMENTS.get(suivant, "\\" + suivant))
                    ligne += suivant == "\n"
                    i += 2
                    continue
                ligne += c == "\n"
                morceaux.append(c)
                i += 1
            jetons.append(Jeton("cite", "".join(morceaux), debut_ligne))
        elif c == "'":
            fin = texte.find("'", i + 1)
            if fin < 0:
                raise ErreurSyntaxeYang(ligne, "chaîne non fermée")
            jetons.append(Jeton("cite", texte[i + 1:fin], ligne))
            ligne += texte.count("\n", i, fin)
            i = fin + 1
        else:
            debut = i
            while i < n:
                c = texte[i]
                if c.isspace() or c in "{};\"'" or texte.startswith("//", i) or texte.startswith("/*", i):
                    break
                i += 1
            jetons.append(Jeton("nu", texte[debut:i], ligne))

    return jetons


# ═══════════════════════════════════════════════════════════
# 2. ARBRE D'INSTRUCTIONS
# ═══════════════════════════════════════════════════════════

@dataclass
class Instruction:
    mot_cle: str
    argument: Optional[str]
    ligne: int
    sous_instructions: List["Instruction"] = field(default_factory=list)

    @property
    def prefixe(self) -> Optional[str]:
        return self.mot_cle.split(":", 1)[0] if ":" in self.mot_cle else None


def construire_instructions(jetons: List[Jeton]) -> List[Instruction]:
    racines: List[Instruction] = []
    pile: List[Instruction] = []
    i, n = 0, len(jetons)

    while i < n:
        jeton = jetons[i]

        if jeton.genre == "ponct":
            if jeton.valeur != "}":
                raise ErreurSyntaxeYang(jeton.ligne, f"mot-clé attendu avant {jeton.valeur!r}")
            if not pile:
                raise ErreurSyntaxeYang(jeton.ligne, "accolade fermante sans ouvrante")
            pile.pop()
            i += 1
            continue

        if jeton.genre != "nu" or MOTIF_MOT_CLE.fullmatch(jeton.valeur) is None:
            raise ErreurSyntaxeYang(jeton.ligne, f"mot-clé invalide : {jeton.valeur!r}")

        instruction = Instruction(jeton.valeur, None, jeton.ligne)
        i += 1

        if i < n and jetons[i].genre != "ponct":
            instruction.argument, i = _lire_argument(jetons, i)

        if i >= n or jetons[i].valeur not in "{;" or jetons[i].genre != "ponct":
            raise ErreurSyntaxeYang(instruction.ligne, f"';' ou '{{' attendu après {instruction.mot_cle}")

        (pile[-1].sous_instructions if pile else racines).append(instruction)

        if jetons[i].valeur == "{":
            if len(pile) >= PROFONDEUR_MAX:
                raise ErreurSyntaxeYang(instruction.ligne, "imbrication trop profonde")
            pile.append(instruction)
        i += 1

    if pile:
        raise ErreurSyntaxeYang(pile[-1].ligne, f"accolade de {pile[-1].mot_cle} non fermée")

    return racines


def _lire_argument(jetons: List[Jeton], i: int) -> Tuple[str, int]:
    jeton = jetons[i]
    if jeton.genre == "nu":
        return jeton.valeur, i + 1

    valeur = jeton.valeur
    i += 1
    # concaténation "a" + "b"
    while (
        i + 1 < len(jetons)
        and jetons[i].genre == "nu" and jetons[i].valeur == "+"
        and jetons[i + 1].genre == "cite"
    ):
        valeur += jetons[i + 1].valeur
        i += 2
    return valeur, i


# ═══════════════════════════════════════════════════════════
# 3. CONSTRUCTION DU MODULE
# ═══════════════════════════════════════════════════════════

def analyser_yang(texte: str) -> ModuleYang:
    """
    Analyse une source YANG du sous-ensemble pris en charge.

    Args:
        texte: Source YANG (un seul module)

    Returns:
        Module avec arbre de nœuds annoté

    Raises:
        ErreurSyntaxeYang: source mal formée
        InstructionNonSupportee: instruction hors du sous-ensemble
    """
    racines = construire_instructions(decouper(texte))

    if len(racines) != 1:
        ligne = racines[1].ligne if len(racines) > 1 else 1
        raise ErreurSyntaxeYang(ligne, "un fichier doit contenir exactement un module")

    instruction = racines[0]
    if instruction.mot_cle == "submodule":
        raise InstructionNonSupportee("submodule", instruction.ligne)
    if instruction.mot_cle != "module":
        raise ErreurSyntaxeYang(instruction.ligne, f"'module' attendu, trouvé {instruction.mot_cle!r}")

    return ConstructeurModule(instruction).construire()


class ConstructeurModule:
    """
    Interprète l'arbre d'instructions d'un module.
    """

    def __init__(self, instruction: Instruction):
        self.instruction = instruction
        self.module = ModuleYang(nom=_identifiant(instruction))
        self.prefixe_uci: Optional[str] = None

    def construire(self) -> ModuleYang:
        module = self.module
        racine = module.racine
        racine.ligne = self.instruction.ligne

        # préfixes d'abord : ils déterminent la lecture des extensions
        for sous in self.instruction.sous_instructions:
            if sous.mot_cle == "prefix":
                module.prefixe = _identifiant(sous)
            elif sous.mot_cle == "import":
                self._import(sous)

        if module.nom == MODULE_EXTENSIONS:
            self.prefixe_uci = module.prefixe

        gestionnaires: Dict[str, Callable[[Instruction], None]] = {
            "namespace": lambda s: setattr(module, "espace_noms", _argument(s)),
            "prefix": lambda s: None,
            "import": lambda s: None,
            "typedef": self._typedef,
            "extension": self._extension,
        }

        for sous in self.instruction.sous_instructions:
            if sous.mot_cle in gestionnaires:
                gestionnaires[sous.mot_cle](sous)
            else:
                self._instruction_noeud(racine, sous)

        completer_noms_section(racine)
        return module

    def _import(self, instruction: Instruction):
        nom = _identifiant(instruction)
        prefixe = None
        for sous in instruction.sous_instructions:
            if sous.mot_cle == "prefix":
                prefixe = _identifiant(sous)
            elif sous.mot_cle not in IGNOREES:
                raise InstructionNonSupportee(sous.mot_cle, sous.ligne)
        if prefixe is None:
            raise ErreurSyntaxeYang(instruction.ligne, f"import de {nom} sans prefix")
        self.module.imports.append((nom, prefixe))
        if nom == MODULE_EXTENSIONS:
            self.prefixe_uci = prefixe

    def _extension(self, instruction: Instruction):
        for sous in instruction.sous_instructions:
            if sous.mot_cle == "argument":
                for detail in sous.sous_instructions:
                    if detail.mot_cle not in IGNOREES:
                        raise InstructionNonSupportee(detail.mot_cle, detail.ligne)
            elif sous.mot_cle not in IGNOREES:
                raise InstructionNonSupportee(sous.mot_cle, sous.ligne)
        self.module.extensions.append(_identifiant(instruction))

    def _typedef(self, instruction: Instruction):
        nom = _identifiant(instruction)
        if nom in self.module.typedefs:
            raise ErreurSyntaxeYang(instruction.ligne, f"typedef {nom} déjà défini")
        definition = None
        for sous in instruction.sous_instructions:
            if sous.mot_cle == "type":
                definition = self._type(sous)
            elif sous.mot_cle not in IGNOREES:
                raise InstructionNonSupportee(sous.mot_cle, sous.ligne)
        if definition is None:
            raise ErreurSyntaxeYang(instruction.ligne, f"typedef {nom} sans type")
        self.module.typedefs[nom] = definition

    def _type(self, instruction: Instruction) -> DefinitionType:
        definition = DefinitionType(nom_base=_argument(instruction), ligne=instruction.ligne)
        for sous in instruction.sous_instructions:
            if sous.mot_cle == "pattern":
                for detail in sous.sous_instructions:
                    if detail.mot_cle not in IGNOREES:
                        raise InstructionNonSupportee(detail.mot_cle, detail.ligne)
                definition.motifs.append(_argument(sous))
            elif sous.mot_cle == "range":
                definition.plage = _argument(sous)
            elif sous.mot_cle == "length":
                definition.longueur = _argument(sous)
            elif sous.mot_cle == "enum":
                for detail in sous.sous_instructions:
                    if detail.mot_cle not in IGNOREES:
                        raise InstructionNonSupportee(detail.mot_cle, detail.ligne)
                definition.enums.append(_argument(sous))
            elif sous.mot_cle == "fraction-digits":
                texte = _argument(sous)
                if re.fullmatch(r"[0-9]{1,2}", texte) is None:
                    raise ErreurSyntaxeYang(sous.ligne, f"fraction-digits invalide : {texte!r}")
                definition.chiffres_fraction = int(texte)
            elif sous.mot_cle not in IGNOREES:
                raise InstructionNonSupportee(sous.mot_cle, sous.ligne)
        return definition

    # ─────────────────────────────────────────────────────────
    # NŒUDS DE DONNÉES
    # ─────────────────────────────────────────────────────────

    def _instruction_noeud(self, parent: NoeudJin, instruction: Instruction):
        """Traite une sous-instruction d'un module, container ou list."""
        mot_cle = instruction.mot_cle

        if instruction.prefixe is not None:
            self._extension_utilisee(parent, instruction)
        elif mot_cle in (CONTENEUR, LISTE, FEUILLE, LISTE_FEUILLES):
            noeud = self._noeud(instruction)
            if noeud.nom in parent.enfants:
                raise ErreurSyntaxeYang(instruction.ligne, f"nœud {noeud.nom} déjà défini")
            parent.enfants[noeud.nom] = noeud
        elif mot_cle in ("key", "unique") and parent.genre == LISTE:
            pass
        elif mot_cle == "ordered-by" and _argument(instruction) == "system":
            pass
        elif mot_cle not in IGNOREES:
            raise InstructionNonSupportee(mot_cle, instruction.ligne)

    def _extension_utilisee(self, noeud: NoeudJin, instruction: Instruction):
        prefixe, nom = instruction.mot_cle.split(":", 1)

        if prefixe == self.prefixe_uci:
            if nom not in ANNOTATIONS:
                raise InstructionNonSupportee(instruction.mot_cle, instruction.ligne)
            setattr(noeud.uci, ANNOTATIONS[nom], _argument(instruction))
            return

        if prefixe != self.module.prefixe and self.module.module_importe(prefixe) is None:
            raise ErreurSyntaxeYang(instruction.ligne, f"préfixe non déclaré : {prefixe}")
        # extension d'un autre module : ignorée avec ses sous-instructions

    def _noeud(self, instruction: Instruction) -> NoeudJin:
        noeud = NoeudJin(
            genre=instruction.mot_cle,
            nom=_identifiant(instruction),
            uci=AnnotationsUci(),
            ligne=instruction.ligne,
        )

        for sous in instruction.sous_instructions:
            if noeud.est_feuille:
                self._instruction_feuille(noeud, sous)
            else:
                self._instruction_noeud(noeud, sous)

        if noeud.est_feuille:
            if noeud.definition_type is None:
                raise ErreurSyntaxeYang(instruction.ligne, f"{noeud.genre} {noeud.nom} sans type")
            noeud.type_ref = noeud.definition_type.nom_base

        if noeud.genre == LISTE:
            self._cles_liste(noeud, instruction)

        return noeud

    def _instruction_feuille(self, noeud: NoeudJin, instruction: Instruction):
        mot_cle = instruction.mot_cle
        if instruction.prefixe is not None:
            self._extension_utilisee(noeud, instruction)
        elif mot_cle == "type":
            noeud.definition_type = self._type(instruction)
        elif mot_cle == "mandatory" and noeud.genre == FEUILLE:
            texte = _argument(instruction)
            if texte not in ("true", "false"):
                raise ErreurSyntaxeYang(instruction.ligne, f"mandatory invalide : {texte!r}")
            noeud.obligatoire = texte == "true"
        elif mot_cle == "ordered-by" and _argument(instruction) == "system":
            pass
        elif mot_cle not in IGNOREES:
            raise InstructionNonSupportee(mot_cle, instruction.ligne)

    def _cles_liste(self, noeud: NoeudJin, instruction: Instruction):
        for sous in instruction.sous_instructions:
            if sous.mot_cle == "key":
                noeud.cles = _argument(sous).split()
            elif sous.mot_cle == "unique":
                noeud.uniques.append(_argument(sous).split())

        if not noeud.cles:
            raise ErreurSyntaxeYang(instruction.ligne, f"list {noeud.nom} sans key")

        for nom in noeud.cles + [n for groupe in noeud.uniques for n in groupe]:
            enfant = noeud.enfants.get(nom)
            if enfant is None or enfant.genre != FEUILLE:
                raise ErreurSyntaxeYang(
                    instruction.ligne, f"list {noeud.nom} : {nom} n'est pas une feuille enfant"
                )


def _argument(instruction: Instruction) -> str:
    if instruction.argument is None:
        raise ErreurSyntaxeYang(instruction.ligne, f"argument manquant pour {instruction.mot_cle}")
    return instruction.argument


def _identifiant(instruction: Instruction) -> str:
    texte = _argument(instruction)
    if MOTIF_IDENTIFIANT_YANG.fullmatch(texte) is None:
        raise ErreurSyntaxeYang(instruction.ligne, f"identifiant invalide : {texte!r}")
    return texte
