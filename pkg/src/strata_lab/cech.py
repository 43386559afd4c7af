"""Graded slices of the Čech-type resolution of an ideal of a divisor arrangement.

Everything happens in one graded degree ``d`` of ``R = Q[x_1..x_n]`` at a time,
so every module is a finite-dimensional vector space and every map an exact
rational matrix.  Quotients ``(R/(f_j : j in J))_d`` are represented by coset
representatives: the monomials that are not pivots of the echelonized ideal
slice, in graded lex order.

Sign conventions: the Čech differential puts ``(-1)^k`` on the block that
omits the ``k``-th index of the larger subset; the Koszul double complex
multiplies vertical maps in column ``p`` by ``(-1)^p``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from . import poly as P
from .exactlin import (
    ComplexOfSpaces,
    RationalMatrix,
    block_matrix,
    cohomology_dims,
    rref,
)
from .parallel import ordered_map

MAX_VARIABLES = 6
MAX_KOSZUL_DIVISORS = 4


class ArrangementError(ValueError):
    pass


class RegularityError(ValueError):
    pass


class ResourceError(ValueError):
    pass


# arrangements -----------------------------------------------------------------

@dataclass(frozen=True)
class Divisor:
    label: str
    poly: Mapping[tuple[int, ...], Fraction] | None = None


@dataclass(frozen=True)
class StratumSpec:
    """One user-declared stratum: a connected component of ``D_J``.

    ``contained_in`` lists ids of strata with one divisor fewer that contain it.
    """

    support: tuple[str, ...]
    component: int = 0
    contained_in: tuple[str, ...] = ()

    @property
    def id(self) -> str:
        return f"{','.join(self.support)}:{self.component}"


@dataclass(frozen=True, eq=False)
class Arrangement:
    """Principal divisors ``V(f_i)`` in the standard-graded polynomial ring."""

    variables: tuple[str, ...]
    divisors: tuple[Divisor, ...]
    strata_mode: str = "auto"
    strata: tuple[StratumSpec, ...] = ()
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "divisors", tuple(self.divisors))
        object.__setattr__(self, "strata", tuple(self.strata))
        n = len(self.variables)
        if n > MAX_VARIABLES:
            raise ArrangementError(f"at most {MAX_VARIABLES} variables are supported, got {n}")
        if len(set(self.variables)) != n:
            raise ArrangementError("variable names must be distinct")
        if self.strata_mode not in ("auto", "explicit"):
            raise ArrangementError(f"unknown strata mode {self.strata_mode!r}")
        labels = [dv.label for dv in self.divisors]
        if len(set(labels)) != len(labels):
            raise ArrangementError("divisor labels must be unique")
        for lab in labels:
            if not lab or any(ch in lab for ch in ",:"):
                raise ArrangementError(f"invalid divisor label {lab!r}")
        polys = []
        clean = []
        for dv in self.divisors:
            if dv.poly is None:
                if self.strata_mode != "explicit":
                    raise ArrangementError(f"divisor {dv.label} has no equation")
                clean.append(dv)
                continue
            p = {tuple(e): Fraction(c) for e, c in dv.poly.items() if c}
            if not p:
                raise ArrangementError(f"divisor {dv.label} is the zero polynomial")
            if any(len(e) != n for e in p):
                raise ArrangementError(f"divisor {dv.label} uses the wrong number of variables")
            if P.degree(p) < 1:
                raise ArrangementError(f"divisor {dv.label} is a nonzero constant")
            if not P.is_homogeneous(p):
                raise ArrangementError(f"divisor {dv.label} is not homogeneous")
            if not P.is_squarefree(p, n):
                raise ArrangementError(f"divisor {dv.label} is not squarefree")
            for lab, q in polys:
                if P.proportional(p, q):
                    raise ArrangementError(f"divisors {lab} and {dv.label} are proportional")
            polys.append((dv.label, p))
            clean.append(Divisor(dv.label, p))
        object.__setattr__(self, "divisors", tuple(clean))
        order = {lab: i for i, lab in enumerate(labels)}
        norm = []
        for st in self.strata:
            if not st.support or any(lab not in order for lab in st.support):
                raise ArrangementError(f"stratum {st.id} names unknown divisors")
            if len(set(st.support)) != len(st.support):
                raise ArrangementError(f"stratum {st.id} repeats a divisor")
            support = tuple(sorted(st.support, key=order.__getitem__))
            norm.append(StratumSpec(support, int(st.component), tuple(st.contained_in)))
        object.__setattr__(self, "strata", tuple(norm))

    @classmethod
    def from_strings(cls, variables: Sequence[str], divisors: Sequence[tuple[str, str]],
                     **kwargs) -> "Arrangement":
        return cls(tuple(variables),
                   tuple(Divisor(lab, P.parse(text, variables)) for lab, text in divisors),
                   **kwargs)

    @classmethod
    def coordinate(cls, variables: Sequence[str], which: Sequence[int] | None = None,
                   labels: Sequence[str] | None = None) -> "Arrangement":
        """Coordinate hyperplanes ``V(x_k)`` for ``k`` in ``which`` (default: all)."""
        n = len(variables)
        which = range(n) if which is None else which
        divs = []
        for pos, k in enumerate(which):
            e = tuple(int(i == k) for i in range(n))
            lab = labels[pos] if labels else f"D{k + 1}"
            divs.append(Divisor(lab, {e: Fraction(1)}))
        return cls(tuple(variables), tuple(divs))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(dv.label for dv in self.divisors)

    @property
    def polys(self) -> tuple[dict, ...]:
        if any(dv.poly is None for dv in self.divisors):
            raise ArrangementError("this arrangement carries no equations (explicit strata only)")
        return tuple(dv.poly for dv in self.divisors)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(P.degree(p) for p in self.polys)

    def __len__(self) -> int:
        return len(self.divisors)

    # graded pieces ---------------------------------------------------------

    def ring_dim(self, d: int) -> int:
        return P.count_monomials(self.nvars, d)

    def quotient(self, subset: tuple[int, ...], d: int) -> "QuotientSlice":
        key = ("quot", subset, d)
        hit = self._cache.get(key)
        if hit is None:
            hit = _quotient_slice(self.nvars, [self.polys[j] for j in subset], d)
            self._cache[key] = hit
        return hit

    def ideal_basis(self, d: int) -> RationalMatrix:
        """Columns ``m * prod(f_i)`` spanning the degree-``d`` slice of the product ideal."""
        prod = P.product(self.polys, self.nvars)
        return _multiples(self.nvars, [prod], d).T

    def ideal_dim(self, d: int) -> int:
        return P.count_monomials(self.nvars, d - sum(self.degrees))


@dataclass(frozen=True, eq=False)
class QuotientSlice:
    """``(R/I)_d`` via coset representatives.

    ``reps`` are monomial indices into ``monomials(n, d)``; ``proj`` maps
    ``R_d`` onto the representative coordinates.
    """

    ring_dim: int
    reps: tuple[int, ...]
    proj: RationalMatrix

    @property
    def dim(self) -> int:
        return len(self.reps)


def _multiples(nvars: int, polys: Sequence[Mapping], d: int) -> RationalMatrix:
    """Rows ``m * f`` for every ``f`` and every monomial ``m`` of the right degree."""
    index = P.monomial_index(nvars, d)
    entries = {}
    row = 0
    for f in polys:
        for m in P.monomials(nvars, d - P.degree(f)):
            for e, c in f.items():
                entries[(row, index[tuple(a + b for a, b in zip(m, e))])] = c
            row += 1
    return RationalMatrix(row, len(index), entries)


def _quotient_slice(nvars: int, polys: Sequence[Mapping], d: int) -> QuotientSlice:
    dim = P.count_monomials(nvars, d)
    gens = _multiples(nvars, polys, d)
    ech, pivots = rref(gens)
    pivset = set(pivots)
    reps = tuple(j for j in range(dim) if j not in pivset)
    pos = {j: k for k, j in enumerate(reps)}
    entries = {(k, j): Fraction(1) for k, j in enumerate(reps)}
    for (i, j), v in ech.entries.items():
        if j in pos:
            entries[(pos[j], pivots[i])] = -v
    return QuotientSlice(dim, reps, RationalMatrix(len(reps), dim, entries))


# Koszul complex and regularity ----------------------------------------------------

def koszul_complex(arr: Arrangement, d: int, indices: Sequence[int] | None = None) -> ComplexOfSpaces:
    """Degree-``d`` slice of the Koszul complex of ``(f_i : i in indices)``.

    Cohomological indexing: the term ``⊕_{|K|=k} R_{d - deg f_K}`` sits in
    degree ``-k``, ending with ``R_d`` in degree 0.
    """
    idx = tuple(range(len(arr))) if indices is None else tuple(indices)
    polys = arr.polys
    n = arr.nvars
    N = len(idx)
    bases = []  # bases[k] = list of (K, monomial)
    for k in range(N + 1):
        terms = []
        for K in combinations(idx, k):
            shift = sum(P.degree(polys[j]) for j in K)
            terms.extend((K, m) for m in P.monomials(n, d - shift))
        bases.append(terms)
    lookup = [{t: i for i, t in enumerate(b)} for b in bases]
    dims = [len(bases[k]) for k in range(N, -1, -1)]
    diffs = []
    for k in range(N, 0, -1):
        entries: dict[tuple[int, int], Fraction] = {}
        for col, (K, m) in enumerate(bases[k]):
            for i, j in enumerate(K):
                sub = K[:i] + K[i + 1:]
                sign = -1 if i % 2 else 1
                for e, c in polys[j].items():
                    row = lookup[k - 1][(sub, tuple(a + b for a, b in zip(m, e)))]
                    entries[(row, col)] = entries.get((row, col), 0) + sign * c
        diffs.append(RationalMatrix(len(bases[k - 1]), len(bases[k]), entries))
    return ComplexOfSpaces(-N, tuple(dims), tuple(diffs))


@dataclass(frozen=True)
class RegularityReport:
    regular: bool
    d_max: int
    witness: dict | None
    table: tuple[dict, ...]

    def to_json(self) -> dict:
        return {
            "regular": self.regular,
            "d_max": self.d_max,
            "verdict": f"regular up to degree {self.d_max}" if self.regular else "not regular",
            "witness": self.witness,
            "table": list(self.table),
        }


def check_regular_sequence(arr: Arrangement, d_max: int) -> RegularityReport:
    """Koszul homology ``H_k`` (k >= 1) of the divisor equations, degree by degree.

    The sequence is certified regular up to ``d_max`` when every ``H_k`` with
    ``k >= 1`` vanishes in degrees ``0..d_max``.
    """
    if d_max < 0:
        raise ValueError("d_max must be nonnegative")
    key = ("regseq", d_max)
    hit = arr._cache.get(key)
    if hit is not None:
        return hit

    def one(d):
        h = cohomology_dims(koszul_complex(arr, d))
        return {"degree": d, "koszul_homology": {str(-n): h[n] for n in sorted(h, reverse=True)}}

    table = tuple(ordered_map(one, range(d_max + 1)))
    witness = None
    for row in table:
        for k, dim in row["koszul_homology"].items():
            if int(k) >= 1 and dim:
                cand = {"degree": row["degree"], "position": int(k), "dim": dim}
                if witness is None or (cand["degree"], cand["position"]) < (witness["degree"], witness["position"]):
                    witness = cand
    report = RegularityReport(witness is None, d_max, witness, table)
    arr._cache[key] = report
    return report


# Čech-type slice ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GradedComplexSlice:
    """``0 -> (prod f)_d -> R_d -> ⊕(R/f_i)_d -> ⊕(R/(f_i,f_j))_d -> ...``.

    ``complex`` starts in degree -1 (the ideal term).  ``blocks[k]`` lists the
    summands of the term in degree ``k - 1`` as ``(subset labels, coset
    representative monomials)``; the ideal term uses the subset ``("*",)``.
    """

    degree: int
    complex: ComplexOfSpaces
    blocks: tuple[tuple[tuple[tuple[str, ...], tuple[tuple[int, ...], ...]], ...], ...]

    @property
    def position_dims(self) -> tuple[int, ...]:
        return self.complex.dims

    def omega(self) -> ComplexOfSpaces:
        """The part from ``R_d`` onwards, positions ``0..N``."""
        c = self.complex
        return ComplexOfSpaces(0, c.dims[1:], c.differentials[1:])


def build_cech_slice(arr: Arrangement, d: int, *, require_regular: bool = True) -> GradedComplexSlice:
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if require_regular:
        rep = check_regular_sequence(arr, d)
        if not rep.regular:
            raise RegularityError(
                f"divisors are not a regular sequence: Koszul H_{rep.witness['position']} "
                f"has dimension {rep.witness['dim']} in degree {rep.witness['degree']}"
            )
    N = len(arr)
    n = arr.nvars
    mons = P.monomials(n, d)
    subsets = [list(combinations(range(N), p)) for p in range(N + 1)]
    quots = [[arr.quotient(J, d) for J in row] for row in subsets]

    ideal = arr.ideal_basis(d)
    dims = [ideal.cols] + [sum(q.dim for q in row) for row in quots]
    diffs = [ideal]
    for p in range(N):
        blocks = {}
        src_index = {J: k for k, J in enumerate(subsets[p])}
        for bi, Jp in enumerate(subsets[p + 1]):
            target = quots[p + 1][bi]
            for pos, j in enumerate(Jp):
                J = Jp[:pos] + Jp[pos + 1:]
                bj = src_index[J]
                piece = target.proj.select_columns(quots[p][bj].reps)
                blocks[(bi, bj)] = piece.scale(-1 if pos % 2 else 1)
        diffs.append(block_matrix(blocks, [q.dim for q in quots[p + 1]], [q.dim for q in quots[p]]))
    labels = arr.labels
    meta = [((("*",), P.monomials(n, d - sum(arr.degrees))),)]
    for p in range(N + 1):
        meta.append(tuple((tuple(labels[j] for j in J), tuple(mons[r] for r in q.reps))
                          for J, q in zip(subsets[p], quots[p])))
    cx = ComplexOfSpaces(-1, tuple(dims), tuple(diffs))
    return GradedComplexSlice(d, cx, tuple(meta))


@dataclass(frozen=True)
class CohomologyTable:
    degree: int
    position_dims: tuple[int, ...]
    term_dims: tuple[int, ...]
    start: int = -1

    @property
    def passed(self) -> bool:
        return not any(self.position_dims)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "start_position": self.start,
            "term_dims": list(self.term_dims),
            "position_dims": list(self.position_dims),
            "pass": self.passed,
        }


def verify_exactness(sl: GradedComplexSlice) -> CohomologyTable:
    h = cohomology_dims(sl.complex)
    return CohomologyTable(sl.degree, tuple(h[n] for n in sl.complex.degrees),
                           sl.complex.dims, sl.complex.start)


def cech_sweep(arr: Arrangement, d_max: int, *, require_regular: bool = True) -> list[CohomologyTable]:
    if require_regular:
        rep = check_regular_sequence(arr, d_max)
        if not rep.regular:
            raise RegularityError(f"divisors are not a regular sequence (witness {rep.witness})")
    return ordered_map(lambda d: verify_exactness(build_cech_slice(arr, d, require_regular=False)),
                       range(d_max + 1))


# Koszul double complex -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class KoszulDoubleSlice:
    """``C^{pq} = ⊕_{|J|=p} ⊕_{K ⊆ J, |K|=-q} R_{d - deg f_K}`` with both differentials.

    ``horizontal[(p, q)]`` maps ``C^{pq} -> C^{p+1,q}``; ``vertical[(p, q)]``
    maps ``C^{pq} -> C^{p,q+1}`` and already carries the ``(-1)^p`` sign.
    """

    degree: int
    n_divisors: int
    bases: Mapping[tuple[int, int], tuple]
    horizontal: Mapping[tuple[int, int], RationalMatrix]
    vertical: Mapping[tuple[int, int], RationalMatrix]

    def dim(self, p: int, q: int) -> int:
        return len(self.bases.get((p, q), ()))

    def row(self, q: int) -> ComplexOfSpaces:
        ps = range(-q, self.n_divisors + 1)
        return ComplexOfSpaces(-q, tuple(self.dim(p, q) for p in ps),
                               tuple(self.horizontal[(p, q)] for p in ps[:-1]))

    def column(self, p: int) -> ComplexOfSpaces:
        qs = range(-p, 1)
        return ComplexOfSpaces(-p, tuple(self.dim(p, q) for q in qs),
                               tuple(self.vertical[(p, q)] for q in qs[:-1]))

    def anticommutes(self) -> bool:
        for (p, q), h in self.horizontal.items():
            if q == 0:
                continue
            lhs = self.vertical[(p + 1, q)] @ h
            rhs = self.horizontal[(p, q + 1)] @ self.vertical[(p, q)]
            if not (lhs + rhs).is_zero():
                return False
        return True

    def total(self) -> ComplexOfSpaces:
        N = self.n_divisors
        pieces = {n: [(p, n - p) for p in range(n, N + 1)] for n in range(N + 1)}
        dims = tuple(sum(self.dim(*pq) for pq in pieces[n]) for n in range(N + 1))
        diffs = []
        for n in range(N):
            src, dst = pieces[n], pieces[n + 1]
            dst_pos = {pq: k for k, pq in enumerate(dst)}
            blocks = {}
            for bj, (p, q) in enumerate(src):
                if (p + 1, q) in dst_pos:
                    blocks[(dst_pos[(p + 1, q)], bj)] = self.horizontal[(p, q)]
                if (p, q + 1) in dst_pos:
                    blocks[(dst_pos[(p, q + 1)], bj)] = self.vertical[(p, q)]
            diffs.append(block_matrix(blocks, [self.dim(*pq) for pq in dst],
                                      [self.dim(*pq) for pq in src]))
        return ComplexOfSpaces(0, dims, tuple(diffs))


def build_koszul_double(arr: Arrangement, d: int) -> KoszulDoubleSlice:
    N = len(arr)
    if N > MAX_KOSZUL_DIVISORS:
        raise ResourceError(f"Koszul double complex limited to {MAX_KOSZUL_DIVISORS} divisors, got {N}")
    polys = arr.polys
    n = arr.nvars
    degs = [P.degree(f) for f in polys]
    bases: dict[tuple[int, int], tuple] = {}
    for p in range(N + 1):
        for J in combinations(range(N), p):
            for k in range(p + 1):
                for K in combinations(J, k):
                    shift = sum(degs[j] for j in K)
                    bases.setdefault((p, -k), [])
                    bases[(p, -k)].extend((J, K, m) for m in P.monomials(n, d - shift))
    for p in range(N + 1):
        for q in range(-p, 1):
            bases.setdefault((p, q), [])
    bases = {key: tuple(v) for key, v in bases.items()}
    lookup = {key: {t: i for i, t in enumerate(v)} for key, v in bases.items()}

    horizontal = {}
    for p in range(N):
        for q in range(-p, 1):
            entries = {}
            tgt = lookup[(p + 1, q)]
            for col, (J, K, m) in enumerate(bases[(p, q)]):
                for j in range(N):
                    if j in J:
                        continue
                    Jp = tuple(sorted(J + (j,)))
                    sign = -1 if Jp.index(j) % 2 else 1
                    entries[(tgt[(Jp, K, m)], col)] = Fraction(sign)
            horizontal[(p, q)] = RationalMatrix(len(bases[(p + 1, q)]), len(bases[(p, q)]), entries)
    vertical = {}
    for p in range(N + 1):
        trick = -1 if p % 2 else 1
        for q in range(-p, 0):
            entries = {}
            tgt = lookup[(p, q + 1)]
            for col, (J, K, m) in enumerate(bases[(p, q)]):
                for i, j in enumerate(K):
                    sub = K[:i] + K[i + 1:]
                    sign = trick * (-1 if i % 2 else 1)
                    for e, c in polys[j].items():
                        key = (tgt[(J, sub, tuple(a + b for a, b in zip(m, e)))], col)
                        entries[key] = entries.get(key, 0) + sign * c
            vertical[(p, q)] = RationalMatrix(len(bases[(p, q + 1)]), len(bases[(p, q)]), entries)
    return KoszulDoubleSlice(d, N, bases, horizontal, vertical)


@dataclass(frozen=True)
class KoszulReport:
    d_max: int
    n_divisors: int
    degrees: tuple[dict, ...]
    violations: tuple[dict, ...]

    @property
    def holds(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "d_max": self.d_max,
            "n_divisors": self.n_divisors,
            "holds": self.holds,
            "violations": list(self.violations),
            "degrees": list(self.degrees),
        }


def _koszul_degree(arr: Arrangement, d: int) -> tuple[dict, list[dict]]:
    N = len(arr)
    dbl = build_koszul_double(arr, d)
    violations = []
    rows = {}
    for q in range(0, -N - 1, -1):
        h = cohomology_dims(dbl.row(q))
        rows[str(q)] = [h[p] for p in sorted(h)]
        if q > -N:
            for p, dim in sorted(h.items()):
                if dim:
                    violations.append({"degree": d, "kind": "row", "q": q, "p": p, "dim": dim})
    tot = cohomology_dims(dbl.total())
    ideal = arr.ideal_dim(d)
    expected = {n: (ideal if n == 0 else 0) for n in tot}
    if tot != expected:
        violations.append({"degree": d, "kind": "total", "dims": [tot[n] for n in sorted(tot)],
                           "expected": [expected[n] for n in sorted(expected)]})
    if not dbl.anticommutes():
        violations.append({"degree": d, "kind": "sign", "detail": "squares do not anticommute"})
    columns = {}
    concentrated = True
    for p in range(N + 1):
        h = cohomology_dims(dbl.column(p))
        columns[str(p)] = [h[q] for q in sorted(h)]
        quotient_dim = sum(arr.quotient(J, d).dim for J in combinations(range(N), p))
        if any(h[q] for q in h if q != 0) or h[0] != quotient_dim:
            concentrated = False
    record = {
        "degree": d,
        "rows": rows,
        "total": [tot[n] for n in sorted(tot)],
        "ideal_dim": ideal,
        "columns": columns,
        "columns_concentrated": concentrated,
    }
    return record, violations


def verify_koszul_conjecture(arr: Arrangement, d_max: int) -> KoszulReport:
    """Check row exactness for ``q > -N`` and ``Tot`` against the product-ideal slice.

    Violations are collected and returned, never raised.
    """
    if len(arr) > MAX_KOSZUL_DIVISORS:
        raise ResourceError(f"Koszul double complex limited to {MAX_KOSZUL_DIVISORS} divisors, got {len(arr)}")
    results = ordered_map(lambda d: _koszul_degree(arr, d), range(d_max + 1))
    degrees = tuple(r for r, _ in results)
    violations = tuple(v for _, vs in results for v in vs)
    return KoszulReport(d_max, len(arr), degrees, violations)


# filtration ----------------------------------------------------------------------

def truncation_filtration(sl: GradedComplexSlice):
    """Filtration by stupid truncations of ``R_d -> ⊕(R/f_i)_d -> ...``.

    ``F^i`` is everything in positions ``>= i``.
    """
    from .specseq import FilteredComplex

    omega = sl.omega()
    weights = [[n] * omega.dim(n) for n in omega.degrees]
    return FilteredComplex.from_weights(omega, weights, length=omega.end)

