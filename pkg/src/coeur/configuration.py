"""
Module de Configuration du Serveur RESTCONF
========================================================

Ce module centralise toutes les configurations du serveur :
répertoire du magasin UCI, répertoire des modèles JIN,
adresse d'écoute et journalisation.

Les valeurs par défaut sont surchargées par l'environnement
(un fichier .env est lu via python-dotenv), puis par la ligne
de commande.
"""

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple

from dotenv import load_dotenv


@dataclass
class ConfigurationMagasin:
    """
    Paramètres du magasin de configuration UCI.
    """
    repertoire: Path = Path("/etc/config")
    delai_verrou_secondes: float = 5.0
    nom_fichier_verrou: str = ".orc.lock"

    def valider(self) -> bool:
        return self.delai_verrou_secondes >= 0 and bool(self.nom_fichier_verrou)


@dataclass
class ConfigurationModeles:
    """
    Répertoire des modèles JIN chargés à chaque démarrage du processus.
    """
    repertoire: Path = Path("/usr/share/orc/jin")

    def valider(self) -> bool:
        return self.repertoire.is_dir()


@dataclass
class ConfigurationServeur:
    """Adresse d'écoute du serveur HTTP embarqué."""
    hote: str = "127.0.0.1"
    port: int = 8080

    def valider(self) -> bool:
        return 0 < self.port < 65536


@dataclass
class ConfigurationJournalisation:
    niveau: str = "INFO"
    dossier_logs: Optional[Path] = None


def analyser_adresse(adresse: str) -> Tuple[str, int]:
    """
    Découpe une adresse 'hote:port' (IPv6 entre crochets acceptée).

    Raises:
        ValueError: si le port est absent ou non numérique
    """
    hote, separateur, port = adresse.rpartition(":")
    if not separateur or not port.isdigit():
        raise ValueError(f"adresse d'écoute invalide : {adresse!r}")
    return hote.strip("[]") or "0.0.0.0", int(port)


class GestionnaireConfiguration:
    """
    Gestionnaire centralisé de configuration du serveur.

    Permet un accès unifié et validé à toutes les configurations.
    """

    def __init__(self, charger_environnement: bool = True):
        self.magasin = ConfigurationMagasin()
        self.modeles = ConfigurationModeles()
        self.serveur = ConfigurationServeur()
        self.journalisation = ConfigurationJournalisation()

        if charger_environnement:
            self._charger_environnement()

    def _charger_environnement(self):
        """
        Applique les variables ORC_* (après lecture d'un éventuel .env).
        """
        load_dotenv(override=False)

        if os.environ.get("ORC_MAGASIN"):
            self.magasin.repertoire = Path(os.environ["ORC_MAGASIN"])
        if os.environ.get("ORC_DELAI_VERROU"):
            self.magasin.delai_verrou_secondes = float(os.environ["ORC_DELAI_VERROU"])
        if os.environ.get("ORC_MODELES"):
            self.modeles.repertoire = Path(os.environ["ORC_MODELES"])
        if os.environ.get("ORC_ECOUTE"):
            self.serveur.hote, self.serveur.port = analyser_adresse(os.environ["ORC_ECOUTE"])
        if os.environ.get("ORC_NIVEAU_JOURNAL"):
            self.journalisation.niveau = os.environ["ORC_NIVEAU_JOURNAL"].upper()
        if os.environ.get("ORC_DOSSIER_JOURNAUX"):
            self.journalisation.dossier_logs = Path(os.environ["ORC_DOSSIER_JOURNAUX"])

    def valider_configuration(self) -> Dict[str, bool]:
        """
        Valide l'ensemble de la configuration.

        Returns:
            Dictionnaire de validation par composant
        """
        return {
            "magasin_valide": self.magasin.valider(),
            "modeles_valides": self.modeles.valider(),
            "serveur_valide": self.serveur.valider(),
        }

    def obtenir_resume(self) -> str:
        """
        Génère un résumé de la configuration active.
        """
        return (
            f"magasin={self.magasin.repertoire} "
            f"verrou={self.magasin.delai_verrou_secondes}s "
            f"modeles={self.modeles.repertoire} "
            f"ecoute={self.serveur.hote}:{self.serveur.port} "
            f"journal={self.journalisation.niveau}"
        )


# Instance globale de configuration
config = GestionnaireConfiguration()
