import pytest

import uqf


def test_cfrac_anchor():
    j = uqf.cfrac(73)
    assert j["a0"] == 8
    assert j["period"] == [1, 1, 5, 5, 1, 1, 16]


def test_cfrac_rejects_squares():
    with pytest.raises(ValueError):
        uqf.cfrac(16)


def test_fundamental_unit():
    assert uqf.fundamental_unit(73) == (943, 250, -1)


def test_element_facts():
    rho = uqf.element_facts(73, 4, 1)
    assert rho["norm"] == 2
    assert rho["trace"] == 9
    assert rho["totally_positive"]
    assert not rho["unit"]


def test_dominated_squares():
    assert uqf.dominated_squares(73, 2, 0) == [(-1, 0), (0, 0), (1, 0)]
    assert uqf.dominated_squares(73, 4, 1) == [(0, 0)]


def test_small_norm_generators():
    assert uqf.small_norm_generators(73, 2) == [(1, 0), (4, 1)]


def test_certify():
    cert = uqf.certify(73, [(1, 0), (4, 1)], mode="product_norm")
    assert cert["valid"]
    assert cert["M"] == 2
    assert cert["D"] == 73
    kinds = {c["kind"] for c in cert["conditions"]}
    assert "product_primitive_small_norm" in kinds


def test_lower_bound():
    rb = uqf.lower_bound(73, [(1, 0), (4, 1)], max_depth=3)
    assert rb["bound"] == 2
    assert rb["exhaustive"] is True


def test_diagonal_lower_bound():
    assert uqf.diagonal_lower_bound(73, [(1, 0), (4, 1)]) == 2


def test_family_search():
    hits = uqf.family_search(2, 3, 1, 10)
    assert {"t": 4, "D": 646, "k": 25, "N": {1: 17}} in hits


def test_count_squarefree():
    assert uqf.count_squarefree((1, 0, 1), 10) == 9
    assert uqf.count_squarefree((1, 0, 1), 10, g=[(2, 1)]) == 8


def test_euler_enclosure():
    lo, hi = uqf.euler_enclosure((1, 0, 1), 300)
    assert lo < 0.894842
    assert hi > 0.894840
    assert 0.8 < lo < hi < 1.0
