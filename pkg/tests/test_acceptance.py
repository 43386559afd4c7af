"""Acceptance criteria, one test each, with wall-clock limits.

Each test records a one-line verdict that the terminal summary prints.
"""
import io
import json
import time
from contextlib import redirect_stdout
from itertools import combinations, product


from oracles import random_ss, renamed
from strata_lab.cech import Arrangement, cech_sweep, check_regular_sequence, verify_koszul_conjecture
from strata_lab.cli import main
from strata_lab.exactlin import cohomology_dims
from strata_lab.specseq import (
    check_convergence,
    compute_pages,
    map_of_spectral_sequences,
    page_violations,
    random_e1_iso_map,
    random_filtered_complex,
)
from strata_lab.ssimplicial import (
    StratumCorrespondence,
    check_thrifty,
    dual_complex,
    glue,
    is_isomorphic,
    skeleton,
    top_cells,
    validate,
)
from strata_lab.scenario import bundled, load_scenario
from strata_lab.toricoh import (
    ConeScenario,
    LineBundle,
    atiyah_table,
    cone_rationality_check,
    h_dim,
)

RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, seconds: float, limit: float, detail: str = ""):
    status = "PASS" if ok and seconds < limit else "FAIL"
    line = f"[{status}] criterion {number:>2}: {title} ({seconds:.3f}s, limit {limit:g}s)"
    if detail:
        line += f" {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line
    assert seconds < limit, line


def cli_json(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, json.loads(buf.getvalue())


def test_criterion_01_blowup_of_two_lines():
    t0 = time.perf_counter()
    code, rep = cli_json("examples", "run", "blp-2lines", "--max-degree", "10")
    h0 = [row["h0"] for row in rep["result"]["table"]["rows"]]
    ok = code == 0 and rep["result"]["total_h1"] == 1 and h0 == [0, 0] + list(range(1, 10))
    record(1, "blp-2lines total h1 = 1, h0 = (0,0,1,...,d-1)", ok, time.perf_counter() - t0, 1.0,
           f"total_h1={rep['result']['total_h1']}")


def test_criterion_02_projective_space_generalisation():
    t0 = time.perf_counter()
    values = {n: h_dim(LineBundle.pn(n - 1, -n), n - 1) for n in (2, 3, 4, 5)}
    code, _ = cli_json("examples", "run", "pn-blowup", "--max-degree", "4")
    ok = all(v == 1 for v in values.values()) and code == 0
    record(2, "h^{n-1}(P^{n-1}, O(-n)) = 1 for n = 2..5", ok, time.perf_counter() - t0, 1.0, str(values))


def test_criterion_03_atiyah_small_resolution():
    t0 = time.perf_counter()
    table = atiyah_table(10)
    oracle = [sum(1 for a, c in product(range(d + 1), repeat=2) if 1 <= a <= d - 1 and c <= d - 1)
              for d in range(11)]
    ok = not any(table.column(1)) and list(table.column(0)) == oracle
    record(3, "Atiyah h1 column zero for d <= 10, h0 matches enumeration", ok, time.perf_counter() - t0, 1.0)


def test_criterion_04_cone_rationality():
    t0 = time.perf_counter()
    good = cone_rationality_check(ConeScenario((1, 1), (2, 1), 10))
    bad = cone_rationality_check(ConeScenario((1, 1), (2, 0), 10))
    ok = good.holds and not bad.holds and bad.failure == (0, 1, 1)
    record(4, "cone criterion: B=(2,1) holds, B=(2,0) fails at (d,i)=(0,1) dim 1", ok,
           time.perf_counter() - t0, 1.0, f"failure={bad.failure}")


def test_criterion_05_cech_exactness_sweep():
    t0 = time.perf_counter()
    names = ["x", "y", "z", "w"]
    failures, count = [], 0
    for n in range(1, 5):
        for k in range(1, n + 1):
            for subset in combinations(range(n), k):
                arr = Arrangement.coordinate(names[:n], which=subset)
                for table in cech_sweep(arr, 6):
                    count += 1
                    if not table.passed:
                        failures.append((n, subset, table.degree))
    record(5, "Čech-type slices exact, coordinate arrangements n <= 4, d <= 6", not failures,
           time.perf_counter() - t0, 30.0, f"slices={count} failures={len(failures)}")


def test_criterion_06_koszul_double_complex():
    t0 = time.perf_counter()
    arrangements = []
    for n in range(1, 4):
        for k in range(1, n + 1):
            for subset in combinations(range(n), k):
                arrangements.append(Arrangement.coordinate(["x", "y", "z"][:n], which=subset))
    arrangements.append(load_scenario(bundled("generic_linear.json")).arrangement)
    findings = []
    for arr in arrangements:
        rep = verify_koszul_conjecture(arr, 6)
        findings.extend(rep.violations)
    record(6, "Koszul rows exact for q > -N and Tot = ideal slice, d <= 6", not findings,
           time.perf_counter() - t0, 30.0, f"arrangements={len(arrangements)} findings={len(findings)}")


def test_criterion_07_spectral_sequence_properties():
    t0 = time.perf_counter()
    bad = []
    for seed in range(50):
        fc, nf = random_filtered_complex(seed, max_dim=8, max_length=4)
        assert max(fc.complex.dims) <= 8 and fc.length <= 4
        ss = compute_pages(fc)
        if page_violations(ss) or not check_convergence(ss, fc.complex).passed:
            bad.append(seed)
        elif not check_convergence(ss.pages, fc.complex).passed:
            bad.append(seed)
    record(7, "d_r^2 = 0, page recursion, sum E_inf = H(Tot) on 50 seeds", not bad,
           time.perf_counter() - t0, 30.0, f"bad_seeds={bad}")


def test_criterion_08_e1_isomorphism_implies_abutment_isomorphism():
    t0 = time.perf_counter()
    bad = []
    for seed in range(20):
        phi = random_e1_iso_map(seed)
        sm = map_of_spectral_sequences(phi)
        hs, ht = cohomology_dims(phi.source.complex), cohomology_dims(phi.target.complex)
        if not (sm.e1_iso and sm.abutment_iso and sm.commutes and hs == ht):
            bad.append(seed)
    record(8, "E_1 isomorphism gives equal abutment dims on 20 seeds", not bad,
           time.perf_counter() - t0, 10.0, f"bad_seeds={bad}")


def test_criterion_09_gluing_roundtrip():
    t0 = time.perf_counter()
    bad = []
    for seed in range(30):
        s = random_ss(seed, max_cells=20, max_dim=3)
        assert s.n_cells() <= 20 and s.dim_bound <= 3
        if s.dim_bound >= 1:
            tops, attach = top_cells(s)
            again = glue(skeleton(s, s.dim_bound - 1), tops, attach)
        else:
            again = s
        if validate(again) or not is_isomorphic(renamed(again, seed + 1), s):
            bad.append(seed)
    record(9, "skeleton + top cells + glue reproduces 30 random objects", not bad,
           time.perf_counter() - t0, 5.0, f"bad_seeds={bad}")


def test_criterion_10_thriftiness_verdicts():
    t0 = time.perf_counter()
    down = dual_complex(load_scenario(bundled("blp2lines_downstairs.json")).arrangement)
    up = dual_complex(load_scenario(bundled("blp2lines_upstairs.json")).arrangement)
    labels = StratumCorrespondence({"D1": "D1", "D2": "D2"})
    blow = check_thrifty(down, up, labels)
    same = check_thrifty(down, down, labels)
    src = dual_complex(load_scenario(bundled("atiyah_source.json")).arrangement)
    tgt = dual_complex(load_scenario(bundled("atiyah_target.json")).arrangement)
    atiyah = check_thrifty(src, tgt, StratumCorrespondence({k: k for k in ("D0", "Dinf", "Cinf")}))
    ok = (blow.verdict == "not_thrifty"
          and blow.witness == {"side": "source", "dimension": 1, "cell": "D1,D2:0"}
          and same.verdict == "thrifty"
          and atiyah.verdict == "not_thrifty")
    record(10, "blowup pair not thrifty (1-cell witness), identity thrifty, Atiyah not thrifty", ok,
           time.perf_counter() - t0, 1.0, f"witness={blow.witness['cell']}")


def test_regularity_precondition_of_sweep_inputs():
    # the largest swept arrangement is a regular sequence, so exactness is expected
    arr = Arrangement.coordinate(["x", "y", "z", "w"])
    assert check_regular_sequence(arr, 6).regular
