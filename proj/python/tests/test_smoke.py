import pytest

import maltsev
from maltsev import catalog


def test_catalog_verdicts():
    assert maltsev.decide_sdmeet(catalog.semilattice_chain(2))["verdict"] == "YES"
    assert maltsev.decide_sdmeet(catalog.majority2())["minimal_level"] == 0
    affine = maltsev.decide_sdmeet(catalog.affine2(), workers=4)
    assert affine["verdict"] == "NO"
    assert affine["minimal_level"] is None


def test_parse_round_trip():
    a = catalog.majority2()
    b = maltsev.parse_algebra(str(a))
    assert b.size == 2
    assert b.symbols == [("maj", 3)]
    assert b.apply(0, [0, 1, 1]) == 1
    with pytest.raises(maltsev.ParseError):
        maltsev.parse_algebra("carrier two")


def test_witness_checks():
    w = maltsev.sigma_witness(catalog.semilattice_chain(2))
    assert w["n"] == 1
    assert len(w["terms"]) == 4
    assert w["check"]


def test_delta():
    assert maltsev.delta_equals_rectangles(catalog.lattice2())
    assert not maltsev.delta_equals_rectangles(catalog.affine2())


def test_compositions():
    s = [(0, 1, 2, 3), (1, 0, 3, 2)]
    assert [tuple(q) for q in maltsev.h_compose(s)] == [(0, 0, 2, 2), (1, 1, 3, 3)]
    assert maltsev.square_convention == "h-shares-column"


def test_sigma_text():
    text = maltsev.emit_sigma(1)
    assert text.startswith("sigma n=1 symbols=4")


def test_lambda():
    ids = maltsev.lambda_identities(1)
    assert "s3(x,y,y,y) = x" in ids
    assert all("s0" not in i for i in maltsev.lambda_identities(1, omit=0))
    assert maltsev.check_projection_model(2, 2, 3)

    f = maltsev.LambdaFree(1)
    assert f.build(1) == (1, False)
    assert f.size == 42
    x, y = maltsev.LambdaFree.x, maltsev.LambdaFree.y
    assert f.apply(0, [y, x, x, x]) == x

    assert maltsev.validate_lambda_on_free(1, 2)["pass"]
    r = maltsev.search_sigma_in_lambda(9, 1, 1)
    assert r["outcome"] == "absent"
    assert r["label"] == "bounded confirmation"
    with pytest.raises(maltsev.InputError):
        maltsev.search_sigma_in_lambda(1, 1, 1)
    assert maltsev.lemma5_reduction_check(3, 3, [0, 5, 6, 7], samples=200)["pass"]
