import json
from decimal import Decimal

import pytest
from fastapi.testclient import TestClient

from src.interface_web.application import creer_application
from src.restconf.requete import TYPE_YANG_JSON
from src.verification.verificateur import (
    CLE_DUPLIQUEE,
    LEXICAL_INVALIDE,
    MOTIF,
    PLAGE,
    VIOLATION_UNIQUE,
    verifier_feuille,
    verifier_unicite_liste,
)
from src.yang.analyseur_yang import analyser_yang
from src.yang.jin import charger_jin, yang_vers_jin
from src.yang.modeles import SpecType

from tests.conftest import DOSSIER_DONNEES, DOSSIER_YANG, empreinte_repertoire

ENTETES = {"Content-Type": TYPE_YANG_JSON}
DONNEES = "/restconf/data"
DEVICE = f"{DONNEES}/example:device"

# État initial : l'exemple de référence, avec une adresse sur eth0
ETAT_INITIAL = {
    "example:device": {
        "name": "Router_0",
        "interfaces": [{"name": "eth0", "enabled": True, "ipaddr": "10.0.0.1"}],
        "applications": ["uhttpd", "luci"],
    }
}


def _envoyer(client, methode, chemin, corps):
    return client.request(methode, chemin, content=json.dumps(corps), headers=ENTETES)


@pytest.fixture
def client_peuple(client):
    reponse = _envoyer(client, "POST", DONNEES, ETAT_INITIAL)
    assert reponse.status_code == 201
    return client


# ═══════════════════════════════════════════════════════════
# FEUILLES
# ═══════════════════════════════════════════════════════════

UINT16 = SpecType(base="uint16", plage=[(Decimal(68), Decimal(9000))])
INT64 = SpecType(base="int64")
DECIMAL = SpecType(base="decimal64", chiffres_fraction=2, plage=[(Decimal(-1), Decimal(1))])
CHAINE = SpecType(base="string", motifs=["[a-z]+"], longueur=[(Decimal(2), Decimal(4))])
ENUM = SpecType(base="enumeration", enums=["static", "dhcp"])


@pytest.mark.parametrize("spec, valeur", [
    (SpecType(base="boolean"), True),
    (UINT16, 68),
    (UINT16, 9000),
    (INT64, "-9223372036854775808"),
    (INT64, "+12"),
    (DECIMAL, "0.5"),
    (DECIMAL, "-1"),
    (DECIMAL, "1.00"),
    (CHAINE, "abcd"),
    (ENUM, "dhcp"),
    (SpecType(base="uint8"), 255),
])
def test_feuille_acceptee(spec, valeur):
    assert verifier_feuille(spec, valeur) is None


@pytest.mark.parametrize("spec, valeur, regle", [
    (SpecType(base="boolean"), "true", LEXICAL_INVALIDE),
    (SpecType(base="boolean"), 1, LEXICAL_INVALIDE),
    (UINT16, True, LEXICAL_INVALIDE),
    (UINT16, 1.5, LEXICAL_INVALIDE),
    (UINT16, "100", LEXICAL_INVALIDE),
    (UINT16, 67, PLAGE),
    (SpecType(base="uint8"), 256, PLAGE),
    (SpecType(base="int8"), -129, PLAGE),
    (INT64, 12, LEXICAL_INVALIDE),
    (INT64, "1e3", LEXICAL_INVALIDE),
    (INT64, "9223372036854775808", PLAGE),
    (DECIMAL, 0.5, LEXICAL_INVALIDE),
    (DECIMAL, "0.125", LEXICAL_INVALIDE),
    (DECIMAL, ".5", LEXICAL_INVALIDE),
    (DECIMAL, "1.01", PLAGE),
    (CHAINE, "a", PLAGE),
    (CHAINE, "abcde", PLAGE),
    (CHAINE, "ab1", MOTIF),
    (CHAINE, 12, LEXICAL_INVALIDE),
    (ENUM, "none", LEXICAL_INVALIDE),
    (ENUM, None, LEXICAL_INVALIDE),
])
def test_feuille_refusee(spec, valeur, regle):
    erreur = verifier_feuille(spec, valeur, "/x")
    assert erreur is not None
    assert (erreur.chemin_json, erreur.regle) == ("/x", regle)


def test_motif_verifie_sur_la_valeur_entiere():
    spec = SpecType(base="string", motifs=["[0-9]+"])
    assert verifier_feuille(spec, "123") is None
    assert verifier_feuille(spec, "123a").regle == MOTIF
    assert verifier_feuille(spec, "a123").regle == MOTIF


def test_tous_les_motifs_s_appliquent():
    spec = SpecType(base="string", motifs=["[a-z0-9]+", "[a-z].*"])
    assert verifier_feuille(spec, "a1") is None
    assert verifier_feuille(spec, "1a").regle == MOTIF


# ═══════════════════════════════════════════════════════════
# UNICITÉ
# ═══════════════════════════════════════════════════════════

def test_unicite_des_cles_et_des_groupes(module_exemple):
    interfaces = module_exemple.racine.enfants["device"].enfants["interfaces"]
    nouveaux = [
        {"name": "a", "ipaddr": "10.0.0.1"},
        {"name": "b", "ipaddr": "10.0.0.1"},
        {"name": "a"},
        {"name": "c"},
    ]

    erreurs = verifier_unicite_liste(module_exemple, interfaces, nouveaux, [{"name": "c"}], "/l")

    assert [(e.chemin_json, e.regle) for e in erreurs] == [
        ("/l[2]", CLE_DUPLIQUEE),
        ("/l[3]", CLE_DUPLIQUEE),
        ("/l[1]", VIOLATION_UNIQUE),
    ]


def test_groupe_unique_incomplet_ignore(module_exemple):
    interfaces = module_exemple.racine.enfants["device"].enfants["interfaces"]
    assert verifier_unicite_liste(module_exemple, interfaces, [{"name": "a"}, {"name": "b"}]) == []


def test_doublons_de_leaf_list(module_exemple):
    applications = module_exemple.racine.enfants["device"].enfants["applications"]
    erreurs = verifier_unicite_liste(module_exemple, applications, ["a", "b", "a"], chemin_json="/apps")
    assert [(e.chemin_json, e.regle) for e in erreurs] == [("/apps[2]", CLE_DUPLIQUEE)]


# ═══════════════════════════════════════════════════════════
# CORPS INVALIDES, DE BOUT EN BOUT
# ═══════════════════════════════════════════════════════════

def _device(**champs):
    return {"example:device": champs}


def _interfaces(*entrees):
    return _device(interfaces=list(entrees))


CORPUS = [
    # feuilles du container
    ("PUT", DEVICE, _device(name="x" * 33), 400, "range"),
    ("PUT", DEVICE, _device(name=""), 400, "range"),
    ("PUT", DEVICE, _device(name=5), 400, "bad-lexical"),
    ("PUT", DEVICE, _device(name="l'apostrophe"), 400, "bad-lexical"),
    ("PUT", DEVICE, _device(name="deux\nlignes"), 400, "bad-lexical"),
    ("PUT", DEVICE, _device(enabled="true"), 400, "bad-lexical"),
    ("PUT", DEVICE, _device(enabled=1), 400, "bad-lexical"),
    ("PUT", DEVICE, _device(latitude=12.5), 400, "bad-lexical"),
    ("PUT", DEVICE, _device(latitude="91"), 400, "range"),
    ("PUT", DEVICE, _device(latitude="1.1234567"), 400, "bad-lexical"),
    ("PUT", DEVICE, _device(latitude="nord"), 400, "bad-lexical"),
    ("PUT", DEVICE, _device(inconnu=1), 400, "unknown-node"),
    ("PUT", DEVICE, {"example:device": {"ex:name": "a"}}, 400, "unknown-node"),
    # leaf-list
    ("PUT", DEVICE, _device(applications="uhttpd"), 400, "wrong-shape"),
    ("PUT", DEVICE, _device(applications=["a", "a"]), 400, "duplicate-key"),
    ("PUT", DEVICE, _device(applications=[1]), 400, "bad-lexical"),
    # list
    ("PUT", DEVICE, _device(interfaces={"name": "eth0"}), 400, "wrong-shape"),
    ("PUT", DEVICE, _interfaces("eth0"), 400, "wrong-shape"),
    ("PUT", DEVICE, _interfaces({"enabled": True}), 400, "missing-key"),
    ("PUT", DEVICE, _interfaces({"name": "a"}, {"name": "a"}), 400, "duplicate-key"),
    ("PUT", DEVICE, _interfaces({"name": "a", "ipaddr": "10.0.0.2"}, {"name": "b", "ipaddr": "10.0.0.2"}),
     400, "unique-violation"),
    ("PUT", DEVICE, _interfaces({"name": "bad name"}), 400, "pattern"),
    ("PUT", DEVICE, _interfaces({"name": "a", "mtu": 67}), 400, "range"),
    ("PUT", DEVICE, _interfaces({"name": "a", "mtu": 9001}), 400, "range"),
    ("PUT", DEVICE, _interfaces({"name": "a", "mtu": 65536}), 400, "range"),
    ("PUT", DEVICE, _interfaces({"name": "a", "mtu": "1500"}), 400, "bad-lexical"),
    ("PUT", DEVICE, _interfaces({"name": "a", "mtu": 1500.0}), 400, "bad-lexical"),
    ("PUT", DEVICE, _interfaces({"name": "a", "mtu": True}), 400, "bad-lexical"),
    ("PUT", DEVICE, _interfaces({"name": "a", "proto": "pppoe"}), 400, "bad-lexical"),
    ("PUT", DEVICE, _interfaces({"name": "a", "metric": 5}), 400, "bad-lexical"),
    ("PUT", DEVICE, _interfaces({"name": "a", "metric": "-1"}), 400, "range"),
    ("PUT", DEVICE, _interfaces({"name": "a", "metric": "1.5"}), 400, "bad-lexical"),
    ("PUT", DEVICE, _interfaces({"name": "a", "metric": "99999999999999999999"}), 400, "range"),
    ("PUT", DEVICE, _interfaces({"name": "a", "ipaddr": "10.0.0"}), 400, "pattern"),
    ("PUT", DEVICE, _interfaces({"name": "a", "ipaddr": "10.0.0.1 "}), 400, "pattern"),
    ("PUT", DEVICE, _interfaces({"name": "a", "inconnu": 1}), 400, "unknown-node"),
    # forme du corps
    ("PUT", DEVICE, {"example:device": []}, 400, "wrong-shape"),
    ("PUT", DEVICE, [1], 400, "wrong-shape"),
    ("PUT", DEVICE, {}, 400, "unknown-element"),
    ("PUT", DEVICE, {"example:system": {}}, 400, "unknown-element"),
    ("PUT", DEVICE, {"autre:device": {}}, 400, "unknown-element"),
    # cibles plus profondes
    ("PUT", f"{DEVICE}/name", {"example:name": 7}, 400, "bad-lexical"),
    ("PUT", f"{DEVICE}/interfaces=eth0/mtu", {"example:mtu": 1}, 400, "range"),
    ("PUT", f"{DEVICE}/interfaces=eth0", {"example:interfaces": [{"name": "eth1"}]}, 400, "missing-key"),
    ("PUT", f"{DEVICE}/interfaces=eth0", {"example:interfaces": [{"name": "eth0"}, {"name": "eth0"}]},
     400, "wrong-shape"),
    ("PUT", f"{DEVICE}/interfaces", {"example:interfaces": [{"name": "a"}, {"name": "a"}]}, 400, "duplicate-key"),
    # ajouts
    ("POST", f"{DEVICE}/interfaces", {"example:interfaces": [{"name": "eth0"}]}, 400, "duplicate-key"),
    ("POST", f"{DEVICE}/interfaces", {"example:interfaces": [{"name": "eth1", "ipaddr": "10.0.0.1"}]},
     400, "unique-violation"),
    ("POST", DEVICE, {"example:interfaces": [{"name": "eth1", "mtu": 0}]}, 400, "range"),
    # créations en conflit
    ("POST", DONNEES, _device(name="R1"), 409, "exists-conflict"),
    ("POST", DONNEES, _device(name="x" * 40), 409, "exists-conflict"),
    ("POST", DEVICE, {"example:name": "R1"}, 409, "exists-conflict"),
    ("POST", DEVICE, {"example:applications": ["x"]}, 409, "exists-conflict"),
    # racine
    ("POST", DONNEES, {"nomodule": 1}, 400, "unknown-node"),
    ("POST", DONNEES, {"example:device": {}, "autre:x": 1}, 400, "unknown-node"),
    ("POST", DONNEES, [], 400, "wrong-shape"),
    ("POST", DONNEES, {}, 400, "wrong-shape"),
]


@pytest.mark.parametrize("methode, chemin, corps, statut, etiquette", CORPUS)
def test_corps_invalide_refuse_sans_ecriture(client_peuple, magasin, methode, chemin, corps, statut, etiquette):
    avant = empreinte_repertoire(magasin.repertoire)

    reponse = _envoyer(client_peuple, methode, chemin, corps)

    assert reponse.status_code == statut, reponse.text
    erreur = reponse.json()["error"]
    assert erreur["tag"] == etiquette
    assert erreur["path"]
    assert empreinte_repertoire(magasin.repertoire) == avant


def test_toutes_les_erreurs_sont_rapportees(client_peuple):
    corps = _interfaces({"name": "a", "mtu": 1}, {"name": "b", "proto": "x", "metric": 3})

    erreur = _envoyer(client_peuple, "PUT", DEVICE, corps).json()["error"]

    assert [(e["path"], e["rule"]) for e in erreur["errors"]] == [
        ("/example:device/interfaces[0]/mtu", "range"),
        ("/example:device/interfaces[1]/proto", "bad-lexical"),
        ("/example:device/interfaces[1]/metric", "bad-lexical"),
    ]
    assert erreur["path"] == "/example:device/interfaces[0]/mtu"


def test_conflit_prime_sur_les_autres_regles(client_peuple):
    reponse = _envoyer(client_peuple, "POST", DONNEES, _device(name="x" * 40))

    regles = {e["rule"] for e in reponse.json()["error"]["errors"]}
    assert regles == {"exists-conflict", "range"}


def test_corps_valide_accepte(client_peuple, magasin):
    reponse = _envoyer(client_peuple, "POST", f"{DEVICE}/interfaces", {"example:interfaces": [
        {"name": "eth1", "ipaddr": "10.0.0.2", "mtu": 1500, "proto": "static", "metric": "0"},
    ]})

    assert reponse.status_code == 201
    assert magasin.compter_sections("example", "interfaces") == 2


# ═══════════════════════════════════════════════════════════
# FEUILLES OBLIGATOIRES ET NOMS DE SECTION
# ═══════════════════════════════════════════════════════════

@pytest.fixture
def client_nomme(magasin):
    extensions = analyser_yang((DOSSIER_YANG / "uci-extensions.yang").read_text(encoding="utf-8"))
    module = analyser_yang((DOSSIER_DONNEES / "exemple_interface.yang").read_text(encoding="utf-8"))
    modele = charger_jin(yang_vers_jin(module, {extensions.nom: extensions}))
    return TestClient(creer_application({modele.nom: modele}, magasin))


def test_feuille_obligatoire_manquante(client_nomme, magasin):
    reponse = _envoyer(client_nomme, "POST", DONNEES, {"example:device": {"interface": [{"name": "lan"}]}})

    assert reponse.status_code == 400
    erreur = reponse.json()["error"]
    assert erreur["tag"] == "mandatory-missing"
    assert erreur["path"] == "/example:device/interface[0]/mtu"
    assert list(magasin.repertoire.iterdir()) == []


def test_nom_de_section_invalide(client_nomme):
    reponse = _envoyer(
        client_nomme, "POST", DONNEES, {"example:device": {"interface": [{"name": "lan 2", "mtu": 1500}]}}
    )

    assert reponse.status_code == 400
    assert reponse.json()["error"]["tag"] == "bad-lexical"
