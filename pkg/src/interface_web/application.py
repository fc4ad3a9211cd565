"""
Serveur HTTP de Test
====================

Application FastAPI servie par uvicorn : une seule route attrape
toutes les méthodes et tous les chemins, puis délègue au gestionnaire
RESTCONF commun avec le CGI. Une requête par connexion.
"""

from typing import Dict, Optional

from fastapi import FastAPI, Request, Response
from starlette.concurrency import run_in_threadpool

from src.coeur.configuration import GestionnaireConfiguration
from src.coeur.journalisation import journaliseur
from src.restconf.gestionnaire import Modeles, traiter_echange
from src.uci.magasin import MagasinUci
from src.yang.jin import charger_modeles

METHODES_HTTP = ["OPTIONS", "HEAD", "GET", "POST", "PUT", "DELETE", "PATCH"]


# ═══════════════════════════════════════════════════════════
# CONFIGURATION APPLICATION
# ═══════════════════════════════════════════════════════════

def creer_application(modeles: Modeles, magasin: MagasinUci) -> FastAPI:
    """
    Construit l'application pour des modèles et un magasin donnés.

    Args:
        modeles: Modèles JIN chargés une fois au démarrage
        magasin: Magasin UCI
    """
    app = FastAPI(
        title="orc - RESTCONF sur UCI",
        description="Accès RESTCONF aux fichiers de configuration UCI",
        version="1.0.0",
        docs_url=None,
        redoc_url=None,
        openapi_url=None,
    )

    @app.api_route("/{chemin:path}", methods=METHODES_HTTP)
    async def echange_restconf(request: Request, chemin: str) -> Response:
        # chemin brut, encore encodé : les clés de liste sont décodées une seule fois
        chemin_brut = request.scope.get("raw_path", b"").decode("latin-1") or request.url.path
        corps = await request.body()

        # traitement bloquant (verrou fichier) : hors de la boucle d'événements
        reponse = await run_in_threadpool(
            traiter_echange,
            modeles,
            magasin,
            request.method,
            chemin_brut,
            corps,
            request.headers.get("content-type"),
        )

        entetes: Dict[str, str] = dict(reponse.entetes)
        entetes["Connection"] = "close"
        contenu = b"" if request.method == "HEAD" else reponse.octets()
        return Response(content=contenu, status_code=reponse.statut, headers=entetes)

    return app


def lancer_serveur(configuration: Optional[GestionnaireConfiguration] = None):
    """
    Sert jusqu'à l'arrêt du processus, requêtes traitées une à une.

    Raises:
        SystemExit: adresse d'écoute indisponible (uvicorn)
    """
    import uvicorn

    from src.coeur.configuration import config as configuration_globale

    configuration = configuration or configuration_globale
    modeles = charger_modeles(configuration.modeles.repertoire)
    magasin = MagasinUci(
        configuration.magasin.repertoire,
        delai_verrou=configuration.magasin.delai_verrou_secondes,
        nom_fichier_verrou=configuration.magasin.nom_fichier_verrou,
    )
    app = creer_application(modeles, magasin)

    hote, port = configuration.serveur.hote, configuration.serveur.port
    journaliseur.info(f"Écoute sur http://{hote}:{port} ({len(modeles)} modèle(s))")
    uvicorn.run(
        app,
        host=hote,
        port=port,
        workers=1,
        http="h11",
        log_level="warning",
        access_log=False,
    )
