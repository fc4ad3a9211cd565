"""
Fixtures partagées : magasin temporaire, modèle d'exemple compilé,
client HTTP sur l'application FastAPI.
"""

import hashlib
import sys
from pathlib import Path

import pytest

RACINE_PROJET = Path(__file__).parent.parent
sys.path.insert(0, str(RACINE_PROJET))

from src.uci.magasin import MagasinUci
from src.yang.analyseur_yang import analyser_yang
from src.yang.jin import charger_jin, yang_vers_jin

DOSSIER_YANG = RACINE_PROJET / "modeles" / "yang"
DOSSIER_JIN = RACINE_PROJET / "modeles" / "jin"
DOSSIER_DONNEES = Path(__file__).parent / "donnees"

# Corps de requête de l'exemple de référence
CORPS_EXEMPLE = {
    "example:device": {
        "name": "Router_0",
        "interfaces": [{
            "name": "eth0",
            "enabled": True,
        }],
        "applications": [
            "uhttpd",
            "luci",
        ],
    }
}


def compiler(nom_fichier: str, *importes: str) -> str:
    """Texte JIN d'un fichier de modeles/yang."""
    ensemble = {}
    for nom in importes:
        module = analyser_yang((DOSSIER_YANG / f"{nom}.yang").read_text(encoding="utf-8"))
        ensemble[module.nom] = module
    module = analyser_yang((DOSSIER_YANG / nom_fichier).read_text(encoding="utf-8"))
    return yang_vers_jin(module, ensemble)


def empreinte_repertoire(repertoire: Path) -> str:
    """Empreinte des fichiers de paquets (fichiers cachés exclus : verrou, temporaires)."""
    sha = hashlib.sha256()
    for fichier in sorted(repertoire.iterdir()):
        if fichier.name.startswith(".") or not fichier.is_file():
            continue
        sha.update(fichier.name.encode())
        sha.update(fichier.read_bytes())
    return sha.hexdigest()


@pytest.fixture
def magasin(tmp_path) -> MagasinUci:
    repertoire = tmp_path / "config"
    repertoire.mkdir()
    return MagasinUci(repertoire, delai_verrou=2.0)


@pytest.fixture(scope="session")
def texte_jin_exemple() -> str:
    return compiler("example.yang", "uci-extensions")


@pytest.fixture
def module_exemple(texte_jin_exemple):
    return charger_jin(texte_jin_exemple)


@pytest.fixture
def modeles(module_exemple):
    return {module_exemple.nom: module_exemple}


@pytest.fixture
def dossier_modeles(tmp_path, texte_jin_exemple) -> Path:
    dossier = tmp_path / "jin"
    dossier.mkdir()
    (dossier / "example.json").write_text(texte_jin_exemple, encoding="utf-8")
    return dossier


@pytest.fixture
def client(modeles, magasin):
    from fastapi.testclient import TestClient

    from src.interface_web.application import creer_application

    return TestClient(creer_application(modeles, magasin))
