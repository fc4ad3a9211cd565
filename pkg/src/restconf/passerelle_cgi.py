"""
Passerelle CGI
==============

Un processus par requête : le serveur web (uHTTPd) fournit les
métadonnées dans l'environnement et le corps sur l'entrée standard ;
la réponse (en-tête Status, en-têtes, ligne vide, corps) part sur
la sortie standard.
"""

from pathlib import Path
from typing import BinaryIO, Callable, Mapping, Union

from src.coeur.erreurs import ErreurOrc, MessageMalforme
from src.coeur.journalisation import journaliseur
from src.restconf.gestionnaire import Modeles, traiter_echange
from src.restconf.requete import ReponseRestconf, reponse_erreur
from src.uci.magasin import MagasinUci
from src.yang.jin import charger_modeles

SourceModeles = Union[str, Path, Callable[[], Modeles]]


def executer_cgi(
    environnement: Mapping[str, str],
    entree: BinaryIO,
    sortie: BinaryIO,
    modeles: SourceModeles,
    magasin: MagasinUci
) -> int:
    """
    Réalise un échange CGI complet.

    Args:
        environnement: Variables CGI (REQUEST_METHOD, PATH_INFO, CONTENT_LENGTH...)
        entree: Flux du corps de requête
        sortie: Flux de réponse
        modeles: Répertoire JIN, ou fonction de chargement
        magasin: Magasin UCI

    Returns:
        0 pour tout échange mené à terme (y compris 4xx / 5xx),
        1 si l'environnement est corrompu ou la réponse n'a pu être écrite
    """
    methode = environnement.get("REQUEST_METHOD")
    if not methode:
        journaliseur.erreur("REQUEST_METHOD absent de l'environnement CGI")
        reponse = reponse_erreur(ErreurOrc("environnement CGI incomplet : REQUEST_METHOD"), "")
        _ecrire(sortie, reponse)
        return 1

    chemin = chemin_requete(environnement)
    requete_query = environnement.get("QUERY_STRING")
    if requete_query:
        journaliseur.avertissement(f"Paramètres de requête ignorés : {requete_query}")

    try:
        corps = lire_corps(environnement, entree)
        charges = modeles() if callable(modeles) else charger_modeles(modeles)
    except ErreurOrc as e:
        reponse = reponse_erreur(e, chemin)
    except Exception as e:
        journaliseur.erreur("Échec du chargement de la requête CGI", exception=e)
        reponse = reponse_erreur(ErreurOrc(f"échec interne : {type(e).__name__}"), chemin)
    else:
        reponse = traiter_echange(
            charges, magasin, methode, chemin, corps, environnement.get("CONTENT_TYPE")
        )

    return 0 if _ecrire(sortie, reponse) else 1


def chemin_requete(environnement: Mapping[str, str]) -> str:
    """
    Chemin encodé de la requête : REQUEST_URI privé de SCRIPT_NAME quand
    il est fourni (non décodé par le serveur), PATH_INFO sinon.
    """
    uri = environnement.get("REQUEST_URI")
    script = environnement.get("SCRIPT_NAME", "")
    if uri:
        uri = uri.split("?", 1)[0]
        if script and uri.startswith(script):
            uri = uri[len(script):]
        return uri or "/"
    return environnement.get("PATH_INFO") or "/"


def lire_corps(environnement: Mapping[str, str], entree: BinaryIO) -> bytes:
    """
    Lit exactement CONTENT_LENGTH octets.

    Raises:
        MessageMalforme: longueur invalide ou corps tronqué
    """
    texte = (environnement.get("CONTENT_LENGTH") or "").strip()
    if not texte:
        return b""
    if not (texte.isascii() and texte.isdigit()):
        raise MessageMalforme(f"CONTENT_LENGTH invalide : {texte!r}")

    attendu = int(texte)
    morceaux = []
    restant = attendu
    while restant > 0:
        morceau = entree.read(restant)
        if not morceau:
            break
        morceaux.append(morceau)
        restant -= len(morceau)

    if restant > 0:
        raise MessageMalforme(f"corps tronqué : {attendu - restant} octet(s) reçus sur {attendu}")
    return b"".join(morceaux)


def formater_reponse(reponse: ReponseRestconf) -> bytes:
    lignes = [f"Status: {reponse.statut} {reponse.raison}"]
    lignes += [f"{nom}: {valeur}" for nom, valeur in reponse.entetes.items()]
    entete = "\r\n".join(lignes) + "\r\n\r\n"
    return entete.encode("utf-8") + reponse.octets()


def _ecrire(sortie: BinaryIO, reponse: ReponseRestconf) -> bool:
    try:
        sortie.write(formater_reponse(reponse))
        sortie.flush()
        return True
    except OSError as e:
        journaliseur.erreur("Écriture de la réponse CGI impossible", exception=e)
        return False
