"""
Analyseur et Sérialiseur UCI
============================

Lecture d'un fichier UCI (guillemets simples, doubles ou absents
acceptés, commentaires ignorés) et écriture sous forme canonique :

    config <type> '<nom>'
    \toption <nom> '<valeur>'
    \tlist <nom> '<valeur>'
    <ligne vide>
"""

import shlex
from typing import List

from src.coeur.erreurs import ErreurSyntaxeUci
from src.uci.modeles import (
    LISTE,
    OPTION,
    DocumentUci,
    SectionUci,
    est_identifiant,
    est_type_section,
)


def analyser_uci(texte: str, nom_paquet: str = "") -> DocumentUci:
    """
    Analyse le contenu d'un fichier UCI.

    Args:
        texte: Contenu du fichier (UTF-8 décodé)
        nom_paquet: Nom du paquet (le nom du fichier)

    Returns:
        Document ordonné

    Raises:
        ErreurSyntaxeUci: mot-clé inconnu, valeur manquante, identifiant invalide
    """
    document = DocumentUci(nom_paquet)
    courante = None

    for numero, ligne in enumerate(texte.splitlines(), start=1):
        if not ligne.strip() or ligne.lstrip().startswith("#"):
            continue

        try:
            jetons = shlex.split(ligne, comments=True, posix=True)
        except ValueError:
            raise ErreurSyntaxeUci(numero, "guillemets ou échappement non fermés")

        if not jetons:
            continue

        mot_cle, arguments = jetons[0], jetons[1:]

        if mot_cle == "config":
            courante = _analyser_config(numero, arguments, document)
            document.sections.append(courante)

        elif mot_cle in (OPTION, LISTE):
            if courante is None:
                raise ErreurSyntaxeUci(numero, f"'{mot_cle}' hors de toute section")
            _analyser_entree(numero, mot_cle, arguments, courante)

        else:
            raise ErreurSyntaxeUci(numero, f"mot-clé inconnu : {mot_cle!r}")

    return document


def _analyser_config(numero: int, arguments: List[str], document: DocumentUci) -> SectionUci:
    if not arguments:
        raise ErreurSyntaxeUci(numero, "type de section manquant")
    if len(arguments) > 2:
        raise ErreurSyntaxeUci(numero, "jetons superflus après le nom de section")

    type_section = arguments[0]
    if not est_type_section(type_section):
        raise ErreurSyntaxeUci(numero, f"type de section invalide : {type_section!r}")

    nom = arguments[1] if len(arguments) == 2 else None
    if nom is not None:
        if not est_identifiant(nom):
            raise ErreurSyntaxeUci(numero, f"nom de section invalide : {nom!r}")
        if document.section_nommee(type_section, nom) is not None:
            raise ErreurSyntaxeUci(numero, f"section '{type_section}.{nom}' déjà définie")

    return SectionUci(type_section, nom)


def _analyser_entree(numero: int, mot_cle: str, arguments: List[str], section: SectionUci):
    if len(arguments) < 2:
        raise ErreurSyntaxeUci(numero, f"valeur manquante pour '{mot_cle}'")
    if len(arguments) > 2:
        raise ErreurSyntaxeUci(numero, "jetons superflus après la valeur")

    nom, valeur = arguments
    if not est_identifiant(nom):
        raise ErreurSyntaxeUci(numero, f"nom d'{mot_cle} invalide : {nom!r}")
    if valeur == "":
        raise ErreurSyntaxeUci(numero, f"valeur vide pour '{nom}'")

    if mot_cle == OPTION:
        section.definir_option(nom, valeur)
    else:
        section.ajouter_valeur_liste(nom, valeur)


def _citer(texte: str) -> str:
    # échappement à la manière de libuci : 'it'\''s'
    return "'" + texte.replace("'", "'\\''") + "'"


def serialiser_uci(document: DocumentUci) -> str:
    """
    Produit la forme canonique d'un document UCI.

    Args:
        document: Document respectant les invariants (identifiants valides)

    Returns:
        Texte du fichier
    """
    lignes: List[str] = []
    for section in document.sections:
        entete = f"config {section.type_section}"
        if section.nom is not None:
            entete += f" {_citer(section.nom)}"
        lignes.append(entete + "\n")

        for entree in section.entrees:
            lignes.append(f"\t{entree.genre} {entree.nom} {_citer(entree.valeur)}\n")

        lignes.append("\n")

    return "".join(lignes)
