from fractions import Fraction
from itertools import combinations

import pytest

from oracles import coordinate_ideal_dim, coordinate_quotient_dim, count_monomials
from strata_lab import poly as P
from strata_lab.cech import (
    Arrangement,
    ArrangementError,
    Divisor,
    RegularityError,
    ResourceError,
    StratumSpec,
    build_cech_slice,
    build_koszul_double,
    cech_sweep,
    check_regular_sequence,
    koszul_complex,
    truncation_filtration,
    verify_exactness,
    verify_koszul_conjecture,
)
from strata_lab.exactlin import cohomology_dims


def xy():
    return Arrangement.coordinate(["x", "y"])


def test_slice_two_lines_degree_two():
    sl = build_cech_slice(xy(), 2)
    assert sl.position_dims == (1, 3, 2, 0)
    assert verify_exactness(sl).position_dims == (0, 0, 0, 0)


def test_slice_three_planes_degree_three():
    table = verify_exactness(build_cech_slice(Arrangement.coordinate(["x", "y", "z"]), 3))
    assert table.term_dims == (1, 10, 12, 3, 0)
    assert table.passed


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_term_dims_match_monomial_counts(n):
    names = ["a", "b", "c", "d"][:n]
    arr = Arrangement.coordinate(names)
    for d in range(5):
        sl = build_cech_slice(arr, d)
        want = [coordinate_ideal_dim(n, range(n), d), count_monomials(n, d)]
        for p in range(1, n + 1):
            want.append(sum(coordinate_quotient_dim(n, J, d) for J in combinations(range(n), p)))
        assert list(sl.position_dims) == want


def test_single_divisor_small_degree():
    sl = build_cech_slice(Arrangement.coordinate(["x"]), 1)
    assert sl.position_dims == (1, 1, 0)


def test_non_coordinate_regular_sequence_is_exact():
    arr = Arrangement.from_strings(["x", "y", "z"], [("A", "x*y"), ("B", "z"), ("G", "x + y + z")])
    assert check_regular_sequence(arr, 4).regular
    assert all(t.passed for t in cech_sweep(arr, 4))


def test_non_regular_pair_detected():
    arr = Arrangement.from_strings(["x", "y", "z"], [("A", "x*y"), ("B", "x*z")])
    rep = check_regular_sequence(arr, 5)
    assert not rep.regular
    assert rep.witness == {"degree": 3, "position": 1, "dim": 1}
    with pytest.raises(RegularityError):
        build_cech_slice(arr, 3)
    # without the precondition the slice shows cohomology next to R_d
    dims = [verify_exactness(build_cech_slice(arr, d, require_regular=False)).position_dims
            for d in (3, 4, 5)]
    assert [h[1] for h in dims] == [1, 2, 3]


def test_regularity_report_is_cached():
    arr = xy()
    assert check_regular_sequence(arr, 3) is check_regular_sequence(arr, 3)


def test_koszul_complex_of_regular_sequence():
    arr = xy()
    for d in range(4):
        h = cohomology_dims(koszul_complex(arr, d))
        assert all(h[n] == 0 for n in h if n < 0)
        assert h[0] == count_monomials(2, d) - (d >= 1) * (2 * count_monomials(2, d - 1) - count_monomials(2, d - 2))


def test_koszul_double_two_lines():
    rep = verify_koszul_conjecture(xy(), 3)
    assert rep.holds
    rec = rep.degrees[3]
    assert rec["total"] == [2, 0, 0] and rec["ideal_dim"] == 2
    assert rec["columns_concentrated"]


def test_koszul_double_anticommutes_and_non_regular_finding():
    arr = Arrangement.from_strings(["x", "y", "z"], [("A", "x*y"), ("B", "x*z")])
    assert build_koszul_double(arr, 3).anticommutes()
    rep = verify_koszul_conjecture(arr, 4)
    assert rep.holds
    assert not all(r["columns_concentrated"] for r in rep.degrees)


def test_koszul_size_limit():
    arr = Arrangement.coordinate(["a", "b", "c", "d", "e"])
    with pytest.raises(ResourceError):
        verify_koszul_conjecture(arr, 1)


def test_truncation_filtration_shape():
    fc = truncation_filtration(build_cech_slice(xy(), 2))
    assert fc.length == 2
    assert fc.graded_dims()[(1, 1)] == 2


def test_ideal_basis_columns_are_multiples_of_product():
    arr = Arrangement.from_strings(["x", "y"], [("A", "x + y"), ("B", "x - y")])
    basis = arr.ideal_basis(3)
    assert basis.cols == 2
    mons = P.monomials(2, 3)
    col = {mons[i]: basis[(i, 0)] for i in range(len(mons)) if basis[(i, 0)]}
    assert col == {(3, 0): 1, (1, 2): -1}


@pytest.mark.parametrize("divs, match", [
    ([("A", "x"), ("A", "y")], "unique"),
    ([("A", "x"), ("B", "2*x")], "proportional"),
    ([("A", "x^2")], "squarefree"),
    ([("A", "x + y^2")], "homogeneous"),
    ([("A,B", "x")], "label"),
])
def test_arrangement_validation(divs, match):
    with pytest.raises(ArrangementError, match=match):
        Arrangement.from_strings(["x", "y"], divs)


def test_arrangement_structural_errors():
    with pytest.raises(ArrangementError):
        Arrangement(tuple("abcdefg"), ())
    with pytest.raises(ArrangementError):
        Arrangement(("x",), (Divisor("A"),))
    with pytest.raises(ArrangementError):
        Arrangement(("x",), (Divisor("A", {(0,): Fraction(3)}),))
    with pytest.raises(ArrangementError):
        Arrangement(("x",), (Divisor("A"),), "explicit", (StratumSpec(("B",)),))
    arr = Arrangement(("x",), (Divisor("A"),), "explicit", (StratumSpec(("A",)),))
    with pytest.raises(ArrangementError):
        arr.polys
