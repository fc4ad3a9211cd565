"""
Requêtes et Réponses RESTCONF
=============================

Forme commune aux deux transports (CGI et serveur HTTP) : décodage
de l'URI sous /restconf/data (ou /data), décodage du corps JSON,
sérialisation unique des corps de réponse.
"""

import json
from dataclasses import dataclass, field
from http import HTTPStatus
from typing import Any, Dict, List, Optional
from urllib.parse import unquote

from src.coeur.erreurs import ErreurOrc, MessageMalforme, NoeudInconnu, TypeMediaNonSupporte
from src.correspondance.contexte import SegmentUri

PREFIXES_DONNEES = ("/restconf/data", "/data")
TYPE_YANG_JSON = "application/yang-data+json"
TYPES_ACCEPTES = {TYPE_YANG_JSON, "application/json"}
METHODES = ("OPTIONS", "HEAD", "GET", "POST", "PUT", "DELETE")

@dataclass
class RequeteRestconf:
    methode: str
    segments: List[SegmentUri]
    corps: Any = None
    type_contenu: str = ""
    chemin: str = "/restconf/data"

    @property
    def a_corps(self) -> bool:
        return self.corps is not None


@dataclass
class ReponseRestconf:
    statut: int
    entetes: Dict[str, str] = field(default_factory=dict)
    corps: Any = None

    @property
    def raison(self) -> str:
        try:
            return HTTPStatus(self.statut).phrase
        except ValueError:
            return "Unknown"

    def octets(self) -> bytes:
        return b"" if self.corps is None else serialiser_corps(self.corps)


def serialiser_corps(corps: Any) -> bytes:
    """Sérialisation partagée par les transports : corps identiques octet pour octet."""
    return (json.dumps(corps, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def analyser_chemin(chemin_brut: str) -> List[SegmentUri]:
    """
    Découpe un chemin encodé sous la racine des données. Les clés d'un
    segment `liste=k1,k2` sont séparées avant décodage, si bien qu'une
    virgule encodée (%2C) reste dans la valeur.

    Raises:
        NoeudInconnu: chemin hors de /restconf/data et /data
    """
    chemin = chemin_brut.split("?", 1)[0]
    for prefixe in PREFIXES_DONNEES:
        if chemin == prefixe or chemin.startswith(prefixe + "/"):
            reste = chemin[len(prefixe):]
            break
    else:
        raise NoeudInconnu(f"ressource inconnue : {chemin}", chemin)

    segments = []
    for texte in reste.split("/"):
        if not texte:
            continue
        if "=" in texte:
            nom, valeurs = texte.split("=", 1)
            segments.append(SegmentUri(unquote(nom), [unquote(v) for v in valeurs.split(",")]))
        else:
            segments.append(SegmentUri(unquote(texte)))
    return segments


def decoder_corps(corps_brut: bytes, type_contenu: Optional[str]) -> Any:
    """
    Raises:
        TypeMediaNonSupporte: type de contenu absent ou non JSON
        MessageMalforme: corps non UTF-8 ou JSON invalide
    """
    if not corps_brut:
        return None

    type_media = (type_contenu or "").split(";", 1)[0].strip().lower()
    if type_media not in TYPES_ACCEPTES:
        raise TypeMediaNonSupporte(f"type de contenu non supporté : {type_contenu!r}")

    try:
        return json.loads(corps_brut.decode("utf-8"))
    except (UnicodeDecodeError, ValueError) as e:
        raise MessageMalforme(f"corps JSON invalide : {e}")


def construire_requete(
    methode: str,
    chemin_brut: str,
    corps_brut: bytes = b"",
    type_contenu: Optional[str] = None
) -> RequeteRestconf:
    return RequeteRestconf(
        methode=methode.upper(),
        segments=analyser_chemin(chemin_brut),
        corps=decoder_corps(corps_brut, type_contenu),
        type_contenu=type_contenu or "",
        chemin=chemin_brut.split("?", 1)[0],
    )


def reponse_erreur(erreur: ErreurOrc, chemin: str, erreurs: Optional[List[Dict[str, str]]] = None) -> ReponseRestconf:
    """Corps d'erreur : {"error": {"tag", "path", "message", "errors"}}."""
    entetes = {"Content-Type": TYPE_YANG_JSON}
    methodes = getattr(erreur, "methodes_autorisees", None)
    if methodes:
        entetes["Allow"] = ", ".join(methodes)
    return ReponseRestconf(
        statut=erreur.statut_http,
        entetes=entetes,
        corps={
            "error": {
                "tag": erreur.etiquette,
                "path": erreur.chemin or chemin,
                "message": erreur.message,
                "errors": erreurs or [],
            }
        },
    )
