"""
Module de Journalisation
==================================

Système de logging structuré du serveur RESTCONF.
La sortie console va sur stderr : en mode CGI, stdout transporte
la réponse HTTP. Le fichier optionnel reçoit une ligne JSON par
événement, ce qui forme aussi la piste d'audit des modifications.
"""

import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional


class FormatteurJson(logging.Formatter):
    """
    Formatteur JSON (une ligne par enregistrement) pour parsing automatisé.
    """

    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "horodatage": datetime.now(timezone.utc).isoformat(),
            "niveau": record.levelname,
            "module": record.module,
            "fonction": record.funcName,
            "ligne": record.lineno,
            "message": record.getMessage(),
            "processus": record.process,
        }

        if hasattr(record, 'donnees_metier'):
            log_data['donnees_metier'] = record.donnees_metier

        if record.exc_info:
            log_data['exception'] = self.formatException(record.exc_info)

        return json.dumps(log_data, ensure_ascii=False)


class Journaliseur:
    """
    Gestionnaire de journalisation du serveur.

    Fonctionnalités:
    - Console (stderr) au format texte
    - Fichier optionnel au format JSON
    - Audit trail des commits de configuration
    """

    def __init__(
        self,
        nom_application: str = "orc",
        niveau: str = "INFO",
        dossier_logs: Optional[Path] = None
    ):
        """
        Initialise le système de journalisation.

        Args:
            nom_application: Nom du logger
            niveau: Niveau de log (DEBUG, INFO, WARNING, ERROR, CRITICAL)
            dossier_logs: Dossier de stockage des logs
        """
        self.nom_application = nom_application
        self.logger = logging.getLogger(nom_application)
        self.logger.propagate = False

        # Éviter la duplication des handlers
        if self.logger.handlers:
            self.logger.handlers.clear()

        self._configurer_handler_console()
        if dossier_logs:
            self._configurer_handler_fichier(dossier_logs)
        self.definir_niveau(niveau)

    def _configurer_handler_console(self):
        handler_console = logging.StreamHandler(sys.stderr)
        handler_console.setFormatter(logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        ))
        self.logger.addHandler(handler_console)

    def _configurer_handler_fichier(self, dossier_logs: Path):
        dossier_logs = Path(dossier_logs)
        dossier_logs.mkdir(parents=True, exist_ok=True)

        fichier_log = dossier_logs / f"{self.nom_application}_{datetime.now():%Y%m%d}.log"

        handler_fichier = logging.FileHandler(fichier_log, encoding='utf-8')
        handler_fichier.setLevel(logging.DEBUG)
        handler_fichier.setFormatter(FormatteurJson())
        self.logger.addHandler(handler_fichier)

    def configurer(self, niveau: str, dossier_logs: Optional[Path] = None):
        """Applique la configuration chargée après l'import du module."""
        if dossier_logs and not any(
            isinstance(h, logging.FileHandler) for h in self.logger.handlers
        ):
            self._configurer_handler_fichier(dossier_logs)
        self.definir_niveau(niveau)

    def definir_niveau(self, niveau: str):
        self.logger.setLevel(getattr(logging, niveau.upper(), logging.INFO))

    def debug(self, message: str, exc_info=False, **kwargs):
        self.logger.debug(message, extra=kwargs, exc_info=exc_info)

    def info(self, message: str, exc_info=False, **kwargs):
        self.logger.info(message, extra=kwargs, exc_info=exc_info)

    def avertissement(self, message: str, exc_info=False, **kwargs):
        self.logger.warning(message, extra=kwargs, exc_info=exc_info)

    def erreur(self, message: str, exception: Optional[Exception] = None, exc_info=False, **kwargs):
        """Log niveau ERROR avec trace optionnelle."""
        if exception:
            message += f" | Exception: {exception}"
        self.logger.error(message, extra=kwargs, exc_info=exc_info or (exception is not None))

    def critique(self, message: str, exc_info=False, **kwargs):
        self.logger.critical(message, extra=kwargs, exc_info=exc_info)

    def audit(self, action: str, details: Dict[str, Any]):
        """
        Log spécifique pour audit trail.

        Args:
            action: Action effectuée (commit, suppression...)
            details: Détails de l'opération
        """
        self.logger.info(
            f"AUDIT | Action: {action}",
            extra={'donnees_metier': {'type': 'audit', 'details': details}}
        )


# Instance globale du journaliseur
journaliseur = Journaliseur(nom_application="orc", niveau="INFO")
