from fractions import Fraction

import pytest

from strata_lab.cech import Arrangement, RegularityError, build_cech_slice, truncation_filtration
from strata_lab.exactlin import ComplexOfSpaces, RationalMatrix, as_matrix, cohomology_dims
from strata_lab.specseq import (
    FilteredComplex,
    FilteredMap,
    FilteredMapError,
    FiltrationError,
    SpectralPage,
    check_convergence,
    compute_pages,
    descent_ss,
    map_of_spectral_sequences,
    page_violations,
    random_e1_iso_map,
    random_filtered_complex,
    random_killing_map,
)


def nonzero(d):
    return {k: v for k, v in d.items() if v}


def small_complex():
    # Q -> Q^2 -> Q with d0 = (1, 1)^T and d1 = (1, -1): exact
    return ComplexOfSpaces(0, (1, 2, 1), (as_matrix([[1], [1]]), as_matrix([[1, -1]])))


def test_trivial_filtration_gives_cohomology_at_e1():
    c = ComplexOfSpaces(0, (2, 1), (as_matrix([[1, 0]]),))
    ss = compute_pages(FilteredComplex.trivial(c))
    assert nonzero(ss.page(1).dims) == {(0, 0): 1}
    assert ss.page(1).is_zero() and ss.stable_from <= 1
    assert check_convergence(ss, c).passed


def test_cone_of_isomorphism_has_zero_limit():
    c = ComplexOfSpaces(0, (1, 1), (as_matrix([[1]]),))
    fc = FilteredComplex.from_weights(c, [[0], [1]])
    ss = compute_pages(fc)
    assert nonzero(ss.page(1).dims) == {(0, 0): 1, (1, 0): 1}
    assert not nonzero(ss.page(2).dims)
    assert not nonzero(ss.infinity)
    assert not page_violations(ss)


def test_truncation_filtration_of_two_line_slice():
    sl = build_cech_slice(Arrangement.coordinate(["x", "y"]), 2)
    fc = truncation_filtration(sl)
    ss = compute_pages(fc)
    row = [ss.page(1).dims[(p, 0)] for p in range(3)]
    assert row == [3, 2, 0]
    h = cohomology_dims(sl.omega())
    assert [ss.infinity_total(n) for n in range(3)] == [h[n] for n in range(3)]


def test_long_differential_is_detected():
    # d maps weight 0 to weight 2, so the class survives until d_2
    c = ComplexOfSpaces(0, (1, 1), (as_matrix([[1]]),))
    fc = FilteredComplex.from_weights(c, [[0], [2]])
    ss = compute_pages(fc)
    assert ss.page(1).is_zero()
    assert not ss.page(2).is_zero()
    assert nonzero(ss.page(2).dims) == {(0, 0): 1, (2, -1): 1}
    assert not nonzero(ss.page(3).dims)
    assert ss.stable_from == 3


def test_general_subspace_filtration():
    c = small_complex()
    # F^1 spanned by the image of d0 in degree 1 and everything in degree 2
    fc = FilteredComplex(c, 1, {(1, 1): as_matrix([[1], [1]]), (1, 2): as_matrix([[1]])})
    fc.validate()
    ss = compute_pages(fc)
    assert not page_violations(ss)
    assert check_convergence(ss, c).passed


def test_invalid_filtrations_rejected():
    c = small_complex()
    with pytest.raises(FiltrationError):
        # d sends weight-1 vector into weight-0 part
        FilteredComplex.from_weights(c, [[1], [0, 0], [0]])
    with pytest.raises(FiltrationError):
        FilteredComplex.from_weights(c, [[0], [0], [0, 0]])
    with pytest.raises(FiltrationError):
        FilteredComplex(c, 2, {(1, 1): as_matrix([[1], [0]]), (2, 1): as_matrix([[0], [1]])}).validate()


def test_corrupted_pages_fail_convergence():
    fc, _ = random_filtered_complex(5)
    ss = compute_pages(fc)
    last = ss.pages[-1]
    key = next(iter(sorted(last.dims)))
    dims = dict(last.dims)
    dims[key] += 1
    bad = SpectralPage(last.r, dims, last.differentials)
    rep = check_convergence(list(ss.pages[:-1]) + [bad], fc.complex)
    assert not rep.passed and rep.offending == (key[0] + key[1],)
    assert check_convergence(ss.pages, fc.complex).passed


@pytest.mark.parametrize("seed", range(12))
def test_random_pages_match_normal_form(seed):
    fc, nf = random_filtered_complex(seed)
    ss = compute_pages(fc)
    for page in ss.pages:
        assert nonzero(page.dims) == nf.expected_dims(page.r), page.r
    assert nonzero(ss.infinity) == nf.expected_infinity()
    assert not page_violations(ss)


def test_identity_map_pages_are_identities():
    fc, _ = random_filtered_complex(3)
    sm = map_of_spectral_sequences(FilteredMap.identity(fc))
    for maps in sm.pages:
        for m in maps.values():
            assert m == RationalMatrix.identity(m.rows)
    assert sm.commutes and sm.e1_iso and sm.abutment_iso


@pytest.mark.parametrize("seed", range(5))
def test_inclusion_with_acyclic_summand(seed):
    phi = random_e1_iso_map(seed)
    sm = map_of_spectral_sequences(phi)
    assert sm.commutes and sm.e1_iso and sm.abutment_iso and sm.implication_holds
    hs = cohomology_dims(phi.source.complex)
    ht = cohomology_dims(phi.target.complex)
    assert hs == ht


def test_killing_a_generator_is_reported():
    found = 0
    for seed in range(10):
        phi = random_killing_map(seed)
        if phi is None:
            continue
        found += 1
        sm = map_of_spectral_sequences(phi)
        assert sm.commutes and not sm.e1_iso and not sm.abutment_iso
        assert sm.implication_holds
    assert found


def test_functoriality_under_composition():
    phi = random_e1_iso_map(2)
    psi = FilteredMap.identity(phi.target)
    comp = psi.compose(phi)
    a = map_of_spectral_sequences(phi)
    c = map_of_spectral_sequences(comp)
    for pa, pc in zip(a.pages, c.pages):
        assert all(pa[k] == pc[k] for k in pa)


def test_filtered_map_validation():
    c = ComplexOfSpaces(0, (1, 1), (as_matrix([[1]]),))
    low = FilteredComplex.from_weights(c, [[0], [0]], length=1)
    high = FilteredComplex.from_weights(c, [[1], [1]])
    with pytest.raises(FilteredMapError):
        FilteredMap(high, low, {0: as_matrix([[1]]), 1: as_matrix([[1]])})
    with pytest.raises(FilteredMapError):
        FilteredMap(low, low, {0: as_matrix([[1]]), 1: as_matrix([[2]])})
    FilteredMap(low, high, {0: as_matrix([[0]]), 1: as_matrix([[0]])})


def test_descent_two_lines():
    rep = descent_ss(Arrangement.coordinate(["x", "y"]), 2)
    js = rep.to_json()
    assert js["descent"]["e1_row"] == [2, 0]
    assert js["descent"]["concentrated_in_row_zero"] and js["descent"]["degenerate"]
    assert js["resolution"]["e1_row"] == [3, 2, 0]
    assert js["resolution"]["abutment"][0] == 1
    assert rep.passed


def test_descent_single_divisor_and_three_planes():
    one = descent_ss(Arrangement.coordinate(["x"]), 1)
    assert one.descent.filtered.length == 0 and one.passed
    three = descent_ss(Arrangement.coordinate(["x", "y", "z"]), 3)
    js = three.to_json()
    assert js["resolution"]["abutment"] == [1, 0, 0, 0] and js["descent"]["abutment"] == [9, 0, 0]
    assert three.passed


def test_descent_requires_regularity():
    arr = Arrangement.from_strings(["x", "y", "z"], [("A", "x*y"), ("B", "x*z")])
    with pytest.raises(RegularityError):
        descent_ss(arr, 3)


def test_page_json_shape():
    ss = compute_pages(truncation_filtration(build_cech_slice(Arrangement.coordinate(["x", "y"]), 2)))
    js = ss.page(1).to_json(matrices=True)
    assert js["r"] == 1
    assert {"p": 0, "q": 0, "dim": 3} in js["entries"]
    assert all(set(d) == {"from", "to", "rank", "matrix"} for d in js["differentials"])
