from decimal import Decimal

import pytest

from src.coeur.erreurs import ErreurSyntaxeYang, TypeInconnu
from src.yang.analyseur_yang import analyser_yang
from src.yang.modeles import DefinitionType, SpecType
from src.yang.types_yang import (
    analyser_intervalles,
    appliquer_restrictions,
    bornes_base,
    intersection,
    resoudre_type,
)

from tests.conftest import DOSSIER_DONNEES


def _d(*paires):
    return [(Decimal(a), Decimal(b)) for a, b in paires]


def test_bornes_des_bases():
    assert bornes_base("uint8") == (Decimal(0), Decimal(255))
    assert bornes_base("int64")[1] == Decimal(9223372036854775807)
    assert bornes_base("decimal64", 2) == (Decimal("-92233720368547758.08"), Decimal("92233720368547758.07"))
    assert bornes_base("string") is None


def test_intervalles_min_max_et_alternatives():
    courants = [bornes_base("uint16")]
    assert analyser_intervalles("min..10 | 20 | 100..max", courants) == _d((0, 10), (20, 20), (100, 65535))


@pytest.mark.parametrize("texte", ["10..1", "a..b", "1..", "NaN"])
def test_intervalles_invalides(texte):
    with pytest.raises(ErreurSyntaxeYang):
        analyser_intervalles(texte, [bornes_base("int32")])


def test_intersection():
    assert intersection(_d((0, 100)), _d((10, 20), (90, 200))) == _d((10, 20), (90, 100))
    assert intersection(_d((0, 5)), _d((6, 9))) == []


def test_restrictions_successives_se_cumulent():
    base = SpecType(base="string", motifs=["[a-z]+"], longueur=_d((1, 16)))

    resultat = appliquer_restrictions(base, DefinitionType("mot", motifs=["a.*"], longueur="min..4"))

    assert resultat.motifs == ["[a-z]+", "a.*"]
    assert resultat.longueur == _d((1, 4))
    assert base.motifs == ["[a-z]+"]


def test_plage_vide_reste_vide_aux_derivations_suivantes():
    vide = appliquer_restrictions(SpecType(base="uint8", plage=_d((0, 5))), DefinitionType("n", plage="6..9"))
    assert vide.plage == []

    assert appliquer_restrictions(vide, DefinitionType("n", plage="0..255")).plage == []
    assert appliquer_restrictions(
        SpecType(base="string", longueur=[]), DefinitionType("s", longueur="1..8")
    ).longueur == []
    with pytest.raises(ErreurSyntaxeYang):
        appliquer_restrictions(vide, DefinitionType("n", plage="min..10"))


def test_restriction_d_enumeration():
    base = SpecType(base="enumeration", enums=["static", "dhcp", "none"])
    assert appliquer_restrictions(base, DefinitionType("proto", enums=["dhcp"])).enums == ["dhcp"]
    with pytest.raises(ErreurSyntaxeYang):
        appliquer_restrictions(base, DefinitionType("proto", enums=["pppoe"]))


@pytest.mark.parametrize("spec, definition", [
    (SpecType(base="uint8"), DefinitionType("uint8", motifs=["x"])),
    (SpecType(base="string"), DefinitionType("string", plage="1..2")),
    (SpecType(base="boolean"), DefinitionType("boolean", longueur="1")),
    (SpecType(base="int8"), DefinitionType("int8", chiffres_fraction=2)),
    (SpecType(base="decimal64"), DefinitionType("decimal64", chiffres_fraction=19)),
    (SpecType(base="string"), DefinitionType("string", motifs=["(non fermé"])),
])
def test_restrictions_incompatibles(spec, definition):
    with pytest.raises(ErreurSyntaxeYang):
        appliquer_restrictions(spec, definition)


def test_resolution_de_chaine_importee():
    communs = analyser_yang((DOSSIER_DONNEES / "types-communs.yang").read_text(encoding="utf-8"))
    module = analyser_yang((DOSSIER_DONNEES / "utilise-types.yang").read_text(encoding="utf-8"))
    ensemble = {communs.nom: communs, module.nom: module}

    assert resoudre_type(ensemble, "tc:petit-pourcentage", module).plage == _d((0, 10))
    assert resoudre_type(ensemble, "etiquette", module).longueur == _d((2, 8))
    assert resoudre_type(ensemble, "uint8", module) == SpecType(base="uint8")
    with pytest.raises(TypeInconnu):
        resoudre_type(ensemble, "tc:absent", module)
    with pytest.raises(TypeInconnu):
        resoudre_type(ensemble, "xx:mot", module)


def test_definition_circulaire():
    module = analyser_yang(
        "module m { prefix m;\n"
        "  typedef a { type b; }\n"
        "  typedef b { type a; }\n"
        "}"
    )
    with pytest.raises(TypeInconnu):
        resoudre_type({"m": module}, "a", module)
