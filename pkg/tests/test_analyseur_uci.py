import random
import string

import pytest

from src.coeur.erreurs import ErreurSyntaxeUci
from src.uci.analyseur_uci import analyser_uci, serialiser_uci
from src.uci.modeles import LISTE, OPTION, DocumentUci, EntreeUci, SectionUci

TEXTE_SYSTEME = """config system
    option hostname "OpenWrt"
    option timezone "UTC"
    # ...

config interface "en0"
    option ip6addr "2001:db8::42/64"
    option ip6gw   "2001:db8::1"
    # ...

config vnstat
    list interface "en0"
    list interface "en1"
    # ...
"""


def test_analyser_trois_sections():
    document = analyser_uci(TEXTE_SYSTEME, "network")

    assert document.nom_paquet == "network"
    assert [(s.type_section, s.nom, len(s.entrees)) for s in document.sections] == [
        ("system", None, 2),
        ("interface", "en0", 2),
        ("vnstat", None, 2),
    ]
    vnstat = document.sections[2]
    assert [e.valeur for e in vnstat.entrees_nommees("interface")] == ["en0", "en1"]
    assert all(e.genre == LISTE for e in vnstat.entrees)


def test_serialiser_section_anonyme_vide():
    document = DocumentUci("system", [SectionUci("system")])
    assert serialiser_uci(document) == "config system\n\n"


def test_serialiser_forme_canonique():
    texte = serialiser_uci(analyser_uci(TEXTE_SYSTEME, "network"))

    assert "config interface 'en0'\n" in texte
    assert "\toption ip6gw '2001:db8::1'\n" in texte
    assert "\tlist interface 'en1'\n" in texte
    assert analyser_uci(texte, "network") == analyser_uci(TEXTE_SYSTEME, "network")


def test_guillemets_absents_simples_ou_doubles():
    texte = "config a 'x'\n\toption b c\n\toption d \"e f\"\n\toption g 'h'\n"
    section = analyser_uci(texte).sections[0]
    assert [(e.nom, e.valeur) for e in section.entrees] == [("b", "c"), ("d", "e f"), ("g", "h")]


def test_apostrophe_echappee_a_la_maniere_de_libuci():
    document = analyser_uci("config a\n\toption texte \"it's\"\n", "p")

    texte = serialiser_uci(document)

    assert "\toption texte 'it'\\''s'\n" in texte
    assert analyser_uci(texte, "p") == document


def test_option_repetee_remplacee_sur_place():
    section = analyser_uci("config a\n\toption x '1'\n\toption y '2'\n\toption x '3'\n").sections[0]
    assert [(e.nom, e.valeur) for e in section.entrees] == [("x", "3"), ("y", "2")]


def test_liste_apres_option_du_meme_nom():
    section = analyser_uci("config a\n\toption x '1'\n\tlist x '2'\n").sections[0]
    assert section.entrees == [EntreeUci(LISTE, "x", "1"), EntreeUci(LISTE, "x", "2")]


@pytest.mark.parametrize("texte, ligne", [
    ("config a\n\tfoo x 'y'\n", 2),
    ("config a\n\toption x\n", 2),
    ("\toption x 'y'\n", 1),
    ("config a\nconfig b 'c.d'\n", 2),
    ("config a\n\toption x-y 'z'\n", 2),
    ("config a\n\toption x 'non fermé\n", 2),
    ("config\n", 1),
    ("config a 'n'\nconfig a 'n'\n", 2),
    ("config a\n\toption x ''\n", 2),
    ("config a:b\n", 1),
])
def test_erreurs_de_syntaxe(texte, ligne):
    with pytest.raises(ErreurSyntaxeUci) as erreur:
        analyser_uci(texte)
    assert erreur.value.ligne == ligne


def test_commentaires_et_lignes_vides_ignores():
    texte = "# entête\n\nconfig a 'b' # fin de ligne\n\n\t# note\n\toption c 'd'\n"
    document = analyser_uci(texte)
    assert document.sections == [SectionUci("a", "b", [EntreeUci(OPTION, "c", "d")])]


# ═══════════════════════════════════════════════════════════
# ALLER-RETOUR SUR DES DOCUMENTS ALÉATOIRES
# ═══════════════════════════════════════════════════════════

CARACTERES_VALEUR = string.ascii_letters + string.digits + " #\\\"'.:/-_éà\t"
CARACTERES_IDENTIFIANT = string.ascii_letters + string.digits + "_"


def _identifiant(rng: random.Random) -> str:
    return "".join(rng.choice(CARACTERES_IDENTIFIANT) for _ in range(rng.randint(1, 8)))


def _valeur(rng: random.Random) -> str:
    valeur = "".join(rng.choice(CARACTERES_VALEUR) for _ in range(rng.randint(1, 12)))
    return valeur if valeur.strip() else valeur + "x"


def _document_aleatoire(rng: random.Random) -> DocumentUci:
    document = DocumentUci("p")
    noms_pris = set()
    for _ in range(rng.randint(0, 5)):
        type_section = rng.choice(["interface", "device", "zone-1", "system"])
        nom = None
        if rng.random() < 0.5:
            nom = _identifiant(rng)
            if (type_section, nom) in noms_pris:
                nom = None
            noms_pris.add((type_section, nom))
        section = SectionUci(type_section, nom)
        noms_entrees = set()
        for _ in range(rng.randint(0, 4)):
            nom_entree = _identifiant(rng)
            if nom_entree in noms_entrees:
                continue
            noms_entrees.add(nom_entree)
            if rng.random() < 0.6:
                section.entrees.append(EntreeUci(OPTION, nom_entree, _valeur(rng)))
            else:
                section.entrees += [
                    EntreeUci(LISTE, nom_entree, _valeur(rng)) for _ in range(rng.randint(1, 3))
                ]
        document.sections.append(section)
    return document


def test_aller_retour_documents_aleatoires():
    rng = random.Random(1234)
    for _ in range(300):
        document = _document_aleatoire(rng)
        texte = serialiser_uci(document)

        relu = analyser_uci(texte, "p")

        assert relu == document, texte
        assert serialiser_uci(relu) == texte
