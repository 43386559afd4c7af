from itertools import product

import pytest

from oracles import cech_p1xp1, count_monomials
from strata_lab.toricoh import (
    ConeScenario,
    LineBundle,
    atiyah_table,
    blp2lines_table,
    cone_rationality_check,
    h_dim,
    h_vector,
    pn_blowup_table,
    top_cohomology_of_exceptional,
)


def test_h_dim_examples():
    assert h_dim(LineBundle.p1(-2), 1) == 1
    assert h_dim(LineBundle.p1(3), 0) == 4
    assert h_dim(LineBundle.pn(3, -4), 3) == 1
    assert h_dim(LineBundle.p1xp1(-2, -1), 1) == 0
    assert h_dim(LineBundle.p1(-1), 0) == h_dim(LineBundle.p1(-1), 1) == 0
    assert h_dim(LineBundle.pn(2, 1), 1) == 0
    with pytest.raises(ValueError):
        h_dim(LineBundle.p1(0), -1)


def test_line_bundle_validation():
    with pytest.raises(ValueError):
        LineBundle("P7", 1)
    with pytest.raises(ValueError):
        LineBundle("Pn", 1, 0)
    with pytest.raises(ValueError):
        LineBundle("P1xP1", 3)
    with pytest.raises(ValueError):
        LineBundle("P1", (1, 1))


@pytest.mark.parametrize("d", range(-8, 9))
def test_serre_duality_on_p1(d):
    assert h_dim(LineBundle.p1(d), 1) == h_dim(LineBundle.p1(-d - 2), 0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_pn_sections_count_monomials_and_duality(n):
    for d in range(-7, 7):
        assert h_dim(LineBundle.pn(n, d), 0) == count_monomials(n + 1, d)
        assert h_dim(LineBundle.pn(n, d), n) == h_dim(LineBundle.pn(n, -d - n - 1), 0)


def test_kunneth_matches_cech_cover():
    for a, b in product(range(-4, 5), repeat=2):
        assert h_vector(LineBundle.p1xp1(a, b)) == cech_p1xp1(a, b), (a, b)


def test_blp2lines_rows():
    t = blp2lines_table(10)
    assert t.rows[0] == (0, 0, 1)
    assert t.rows[1] == (1, 0, 0)
    assert t.rows[4] == (4, 3, 0)
    assert t.total(1) == 1
    assert all(blp2lines_table(d).total(1) == 1 for d in range(6))
    with pytest.raises(ValueError):
        blp2lines_table(-1)


def test_pn_generalisation():
    for n in range(2, 6):
        assert top_cohomology_of_exceptional(n) == 1
        assert pn_blowup_table(n, 6).total(1) == 1
    assert pn_blowup_table(2, 5).rows == blp2lines_table(5).rows


def atiyah_oracle(d):
    return sum(1 for a, c in product(range(d + 1), repeat=2) if 1 <= a <= d - 1 and 0 <= c <= d - 1)


def test_atiyah_table_against_enumeration():
    t = atiyah_table(10)
    assert t.rows[0] == (0, 0, 0)
    assert t.rows[2] == (2, 2, 0)
    assert list(t.column(0)) == [atiyah_oracle(d) for d in range(11)]
    assert not any(t.column(1))


def test_cone_rationality():
    ok = cone_rationality_check(ConeScenario((1, 1), (2, 1), 10))
    assert ok.holds and ok.failure is None
    bad = cone_rationality_check(ConeScenario((1, 1), (2, 0), 10))
    assert not bad.holds and bad.failure == (0, 1, 1)
    assert cone_rationality_check(ConeScenario((1, 1), (0, 0), 5)).holds
    assert bad.to_json()["failure"] == {"d": 0, "i": 1, "dim": 1}
    with pytest.raises(ValueError):
        ConeScenario((0, 1), (0, 0), 3)
