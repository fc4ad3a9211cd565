"""
yang2jin
========

Conversion hors ligne d'un module YANG annoté en document JIN.

    python -m src.outils.yang2jin modeles/yang/example.yang -I modeles/yang -o modeles/jin/example.json

Les imports sont cherchés sous la forme <module>.yang dans le
répertoire du fichier puis dans chaque répertoire -I. Les erreurs
s'affichent `<fichier>:<ligne>: <code>: <message>` et le code de
sortie vaut 1.
"""

import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

RACINE_PROJET = Path(__file__).parent.parent.parent
sys.path.insert(0, str(RACINE_PROJET))

import typer

from src.coeur.erreurs import ErreurAnnotation, ErreurOrc, ErreurSyntaxeYang, InstructionNonSupportee, TypeInconnu
from src.yang.analyseur_yang import analyser_yang
from src.yang.jin import yang_vers_jin
from src.yang.modeles import ModuleYang

app = typer.Typer(add_completion=False, help="Convertit un module YANG annoté UCI en JIN")


class ImportIntrouvable(ErreurOrc):
    def __init__(self, nom: str, ligne: int = 0):
        super().__init__(f"module importé introuvable : {nom}")
        self.nom = nom
        self.ligne = ligne


def charger_source(fichier: Path) -> ModuleYang:
    return analyser_yang(fichier.read_text(encoding="utf-8"))


def resoudre_imports(
    module: ModuleYang,
    repertoires: Sequence[Path],
    ensemble: Optional[Dict[str, ModuleYang]] = None
) -> Dict[str, ModuleYang]:
    """
    Charge récursivement les modules importés.

    Raises:
        ImportIntrouvable: aucun <module>.yang dans les répertoires
    """
    ensemble = ensemble if ensemble is not None else {}
    ensemble.setdefault(module.nom, module)

    for nom, _ in module.imports:
        if nom in ensemble:
            continue
        fichier = next((r / f"{nom}.yang" for r in repertoires if (r / f"{nom}.yang").is_file()), None)
        if fichier is None:
            raise ImportIntrouvable(nom, module.racine.ligne or 0)
        importe = charger_source(fichier)
        ensemble[importe.nom] = importe
        resoudre_imports(importe, repertoires, ensemble)

    return ensemble


def convertir(fichier: Path, repertoires_import: Sequence[Path] = ()) -> str:
    """Texte JIN d'un fichier YANG."""
    module = charger_source(fichier)
    repertoires = [fichier.parent, *repertoires_import]
    return yang_vers_jin(module, resoudre_imports(module, repertoires))


def _diagnostics(fichier: str, erreur: Exception) -> List[str]:
    if isinstance(erreur, ErreurAnnotation):
        return [d.formater(fichier) for d in erreur.diagnostics]
    if isinstance(erreur, InstructionNonSupportee):
        return [f"{fichier}:{erreur.ligne}: UnsupportedStatement: {erreur.raison}"]
    if isinstance(erreur, ErreurSyntaxeYang):
        return [f"{fichier}:{erreur.ligne}: SyntaxError: {erreur.raison}"]
    if isinstance(erreur, TypeInconnu):
        return [f"{fichier}:0: UnknownType: {erreur.message}"]
    if isinstance(erreur, ImportIntrouvable):
        return [f"{fichier}:{erreur.ligne}: ImportNotFound: {erreur}"]
    return [f"{fichier}:0: IOError: {erreur}"]


@app.command()
def yang2jin(
    fichier: Path = typer.Argument(..., help="Source YANG"),
    repertoires_import: List[Path] = typer.Option([], "-I", "--import-dir", help="Répertoire d'imports"),
    sortie: Optional[Path] = typer.Option(None, "-o", "--output", help="Fichier JIN (stdout sinon)"),
):
    try:
        texte = convertir(fichier, repertoires_import)
    except (ErreurAnnotation, ErreurSyntaxeYang, TypeInconnu, ImportIntrouvable, OSError) as e:
        for ligne in _diagnostics(str(fichier), e):
            typer.echo(ligne, err=True)
        raise typer.Exit(1)

    if sortie is None:
        typer.echo(texte, nl=False)
    else:
        sortie.write_text(texte, encoding="utf-8")


def main():
    app()


if __name__ == "__main__":
    main()
