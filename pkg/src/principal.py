"""
Script Principal de Démarrage
Point d'entrée `orc` : un échange CGI, ou le serveur HTTP de test
"""

import os
import sys
from pathlib import Path
from typing import Optional

# Ajouter la racine du projet au path Python
RACINE_PROJET = Path(__file__).parent.parent
sys.path.insert(0, str(RACINE_PROJET))

import typer

from src.coeur.configuration import analyser_adresse, config
from src.coeur.journalisation import journaliseur

app = typer.Typer(add_completion=False, help="Serveur RESTCONF sur fichiers UCI")


@app.command()
def orc(
    models: Optional[Path] = typer.Option(None, "--models", help="Répertoire des modèles JIN"),
    store: Optional[Path] = typer.Option(None, "--store", help="Répertoire du magasin UCI"),
    cgi: Optional[bool] = typer.Option(None, "--cgi/--no-cgi", help="Un seul échange CGI"),
    listen: Optional[str] = typer.Option(None, "--listen", help="Adresse d'écoute hote:port"),
    lock_timeout: Optional[float] = typer.Option(None, "--lock-timeout", help="Attente du verrou (s)"),
):
    """
    Démarre orc. Sans option, le mode CGI est choisi quand
    GATEWAY_INTERFACE est présent dans l'environnement.
    """
    if models is not None:
        config.modeles.repertoire = models
    if store is not None:
        config.magasin.repertoire = store
    if lock_timeout is not None:
        config.magasin.delai_verrou_secondes = lock_timeout

    mode_cgi = cgi if cgi is not None else (listen is None and "GATEWAY_INTERFACE" in os.environ)

    if mode_cgi:
        # stderr va au journal d'erreurs du serveur web : rester discret
        niveau = os.environ.get("ORC_NIVEAU_JOURNAL", "WARNING")
        journaliseur.configurer(niveau, config.journalisation.dossier_logs)
        raise typer.Exit(executer_echange_cgi())

    if listen is not None:
        try:
            config.serveur.hote, config.serveur.port = analyser_adresse(listen)
        except ValueError as e:
            journaliseur.critique(str(e))
            raise typer.Exit(2)

    journaliseur.configurer(config.journalisation.niveau, config.journalisation.dossier_logs)
    demarrer_serveur()


def executer_echange_cgi() -> int:
    from src.restconf.passerelle_cgi import executer_cgi
    from src.uci.magasin import MagasinUci

    magasin = MagasinUci(
        config.magasin.repertoire,
        delai_verrou=config.magasin.delai_verrou_secondes,
        nom_fichier_verrou=config.magasin.nom_fichier_verrou,
    )
    return executer_cgi(
        os.environ, sys.stdin.buffer, sys.stdout.buffer, config.modeles.repertoire, magasin
    )


def demarrer_serveur():
    """
    Démarre le serveur HTTP de test.
    """
    journaliseur.info("=" * 70)
    journaliseur.info("ORC - SERVEUR RESTCONF - DÉMARRAGE")
    journaliseur.info("=" * 70)

    resultats = config.valider_configuration()
    if not all(resultats.values()):
        journaliseur.critique(f"✗ Configuration invalide : {resultats}")
        raise typer.Exit(1)
    journaliseur.info(f"✓ Configuration validée : {config.obtenir_resume()}")

    from src.interface_web.application import lancer_serveur

    try:
        lancer_serveur(config)
    except KeyboardInterrupt:
        journaliseur.info("Arrêt du serveur demandé par l'utilisateur")
    except Exception as e:
        journaliseur.critique(f"Erreur fatale : {e}")
        raise typer.Exit(1)


def main():
    app()


if __name__ == "__main__":
    main()
