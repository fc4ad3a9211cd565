import json

import pytest

from src.coeur.erreurs import ErreurAnnotation, ErreurFormatJin, TypeInconnu
from src.yang.analyseur_yang import analyser_yang
from src.yang.annotations import LISTE_SANS_SECTION
from src.yang.jin import charger_jin, charger_modeles, normaliser_module, spec_de, yang_vers_jin

from tests.conftest import DOSSIER_DONNEES, DOSSIER_JIN, DOSSIER_YANG, compiler


def _module(chemin):
    return analyser_yang(chemin.read_text(encoding="utf-8"))


def _ensemble(*chemins):
    modules = [_module(c) for c in chemins]
    return {m.nom: m for m in modules}


def test_modele_livre_identique_a_la_conversion(texte_jin_exemple):
    assert texte_jin_exemple == (DOSSIER_JIN / "example.json").read_text(encoding="utf-8")


def test_structure_du_document(texte_jin_exemple):
    document = json.loads(texte_jin_exemple)

    assert document["type"] == "module"
    assert document["package"] == "example"
    device = document["map"]["device"]
    assert device["section-name"] == "device"
    assert device["map"]["interfaces"]["keys"] == ["name"]
    assert device["map"]["enabled"] == {"type": "leaf", "option": "enabled", "leaf-type": "boolean"}
    assert document["map"]["system"]["section-name"] == ""
    assert document["typedefs"]["ipv4-address"]["base"] == "string"


def test_variante_leaf_as_name_convertie():
    module = _module(DOSSIER_DONNEES / "exemple_interface.yang")
    document = json.loads(yang_vers_jin(module, _ensemble(DOSSIER_YANG / "uci-extensions.yang")))

    interface = document["map"]["device"]["map"]["interface"]
    assert interface["section"] == "interface"
    assert interface["leaf-as-name"] == "name"
    assert interface["map"]["mtu"]["mandatory"] is True


def test_charger_jin_reconstruit_le_modele_normalise(texte_jin_exemple):
    source = _module(DOSSIER_YANG / "example.yang")
    attendu = normaliser_module(source, _ensemble(DOSSIER_YANG / "uci-extensions.yang"))

    assert charger_jin(texte_jin_exemple) == attendu


def test_aller_retour_types_importes():
    ensemble = _ensemble(DOSSIER_DONNEES / "types-communs.yang")
    module = _module(DOSSIER_DONNEES / "utilise-types.yang")

    texte = yang_vers_jin(module, ensemble)
    charge = charger_jin(texte)

    assert charge == normaliser_module(module, ensemble)
    assert sorted(json.loads(texte)["typedefs"]) == [
        "etiquette", "tc:mot", "tc:petit-pourcentage", "tc:pourcentage",
    ]
    quota = charge.racine.enfants["quota"]
    reserve = spec_de(charge, quota.enfants["reserve"])
    assert reserve.base == "uint8"
    assert [(str(a), str(b)) for a, b in reserve.plage] == [("1", "5")]
    etiquette = spec_de(charge, quota.enfants["nom"])
    assert etiquette.motifs == ["[a-z]+"]
    assert [(str(a), str(b)) for a, b in etiquette.longueur] == [("2", "8")]


def test_import_manquant():
    module = _module(DOSSIER_DONNEES / "utilise-types.yang")
    with pytest.raises(TypeInconnu):
        yang_vers_jin(module, {})


def test_conversion_refusee_si_annotation_invalide():
    module = _module(DOSSIER_DONNEES / "yang_invalides" / "container_dans_liste.yang")
    with pytest.raises(ErreurAnnotation) as erreur:
        yang_vers_jin(module)
    assert [d.code for d in erreur.value.diagnostics] == ["NestedInListUnsupported"]


# ═══════════════════════════════════════════════════════════
# DOCUMENTS JIN MAL FORMÉS
# ═══════════════════════════════════════════════════════════

def _muter(texte, mutation):
    document = json.loads(texte)
    mutation(document)
    return json.dumps(document)


def _device(d):
    return d["map"]["device"]


def _interfaces(d):
    return d["map"]["device"]["map"]["interfaces"]


MUTATIONS = [
    (lambda d: d.pop("type"), "/type"),
    (lambda d: d.update(type="container"), "/type"),
    (lambda d: d.pop("map"), "/map"),
    (lambda d: _device(d)["map"]["name"].pop("leaf-type"), "/map/device/map/name/leaf-type"),
    (lambda d: _device(d)["map"]["name"].update({"leaf-type": "inconnu"}), "/map/device/map/name/leaf-type"),
    (lambda d: _device(d).update(inconnue=1), "/map/device/inconnue"),
    (lambda d: _device(d).update(type="choice"), "/map/device/type"),
    (lambda d: _device(d).update(keys=["name"]), "/map/device/keys"),
    (lambda d: _device(d).pop("map"), "/map/device/map"),
    (lambda d: _interfaces(d).pop("keys"), "/map/device/map/interfaces/keys"),
    (lambda d: _interfaces(d).update(keys=["absente"]), "/map/device/map/interfaces/keys/0"),
    (lambda d: _interfaces(d).update(unique=[["applications"]]), "/map/device/map/interfaces/unique/0"),
    (lambda d: _device(d)["map"]["applications"].update(mandatory=True), "/map/device/map/applications/mandatory"),
    (lambda d: _device(d)["map"]["name"].update(mandatory="oui"), "/map/device/map/name/mandatory"),
    (lambda d: d["typedefs"]["ipv4-address"].update(base="ipv4"), "/typedefs/ipv4-address/base"),
    (lambda d: d["typedefs"]["ipv4-address"].update(patterns=["[0-9"]), "/typedefs/ipv4-address/patterns/0"),
    (lambda d: d["typedefs"]["ipv4-address"].update(range=[["0", "1"]]), "/typedefs/ipv4-address/range"),
    (lambda d: _interfaces(d)["map"]["mtu"]["type-spec"].update(range=[["9000", "68"]]),
     "/map/device/map/interfaces/map/mtu/type-spec/range/0"),
    (lambda d: _interfaces(d)["map"]["mtu"]["type-spec"].update(range=[["a", "b"]]),
     "/map/device/map/interfaces/map/mtu/type-spec/range/0"),
    (lambda d: _interfaces(d)["map"]["proto"]["type-spec"].update(enums=[]),
     "/map/device/map/interfaces/map/proto/type-spec"),
]


@pytest.mark.parametrize("mutation, chemin", MUTATIONS)
def test_document_mal_forme(texte_jin_exemple, mutation, chemin):
    with pytest.raises(ErreurFormatJin) as erreur:
        charger_jin(_muter(texte_jin_exemple, mutation))
    assert erreur.value.chemin == chemin


def test_document_vide():
    with pytest.raises(ErreurFormatJin) as erreur:
        charger_jin("{}")
    assert erreur.value.chemin == "/type"


def test_texte_non_json():
    with pytest.raises(ErreurFormatJin):
        charger_jin("module example {")


def test_nom_de_repli(texte_jin_exemple):
    texte = _muter(texte_jin_exemple, lambda d: d.pop("name"))
    assert charger_jin(texte, nom_module="example").nom == "example"
    with pytest.raises(ErreurFormatJin) as erreur:
        charger_jin(texte)
    assert erreur.value.chemin == "/name"


def test_annotations_verifiees_au_chargement(texte_jin_exemple):
    texte = _muter(texte_jin_exemple, lambda d: _interfaces(d).pop("section"))
    with pytest.raises(ErreurAnnotation) as erreur:
        charger_jin(texte)
    assert [d.code for d in erreur.value.diagnostics] == [LISTE_SANS_SECTION]


# ═══════════════════════════════════════════════════════════
# RÉPERTOIRE DE MODÈLES
# ═══════════════════════════════════════════════════════════

def test_charger_modeles(tmp_path, texte_jin_exemple):
    (tmp_path / "example.json").write_text(texte_jin_exemple, encoding="utf-8")
    (tmp_path / "zz-copie.json").write_text(texte_jin_exemple, encoding="utf-8")
    (tmp_path / "notes.txt").write_text("ignoré", encoding="utf-8")

    modeles = charger_modeles(tmp_path)

    assert list(modeles) == ["example"]


def test_charger_modeles_fichier_invalide(tmp_path, texte_jin_exemple):
    (tmp_path / "example.json").write_text(texte_jin_exemple, encoding="utf-8")
    (tmp_path / "casse.json").write_text("{}", encoding="utf-8")
    with pytest.raises(ErreurFormatJin):
        charger_modeles(tmp_path)


def test_charger_modeles_depuis_le_depot():
    modeles = charger_modeles(DOSSIER_JIN)
    assert modeles["example"] == charger_jin(compiler("example.yang", "uci-extensions"))
