"""Spectral sequences of bounded descending filtrations over the rationals.

Pages are built from explicit subquotients

    Z_r^{p,n} = {x in F^p C^n : dx in F^{p+r} C^{n+1}}
    E_r^{p,q} = Z_r^{p,n} / (Z_{r-1}^{p+1,n} + d Z_{r-1}^{p-r+1,n-1}),   n = p + q

with ``d_r[x] = [dx]``.  For a filtration of length ``L`` (``F^0 = C``,
``F^{L+1} = 0``) every ``d_r`` with ``r > L`` vanishes, so page ``L + 1`` is
already ``E_inf``; ``E_inf`` is still computed separately from
``Z_inf / (Z_inf^{p+1} + im d ∩ F^p)`` so the two can be compared.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .cech import Arrangement, RegularityError, build_cech_slice, check_regular_sequence
from .exactlin import (
    ComplexOfSpaces,
    RationalMatrix,
    cohomology_dims,
    hstack,
    image_basis,
    intersect,
    kernel_basis,
    left_annihilator,
    quotient_basis,
    rank,
    solve_in_basis,
)


class FiltrationError(ValueError):
    pass


class FilteredMapError(ValueError):
    pass


def _contained(a: RationalMatrix, b: RationalMatrix) -> bool:
    """span(a) ⊆ span(b)."""
    if a.cols == 0:
        return True
    if b.cols == 0:
        return a.is_zero()
    return (left_annihilator(b) @ a).is_zero()


@dataclass(frozen=True, eq=False)
class FilteredComplex:
    """A complex with a descending filtration ``C = F^0 ⊇ F^1 ⊇ ... ⊇ F^{L+1} = 0``.

    ``subspaces[(p, n)]`` holds a column basis of ``F^p C^n`` for ``1 <= p <= L``.
    """

    complex: ComplexOfSpaces
    length: int
    subspaces: Mapping[tuple[int, int], RationalMatrix] = field(default_factory=dict)

    def __post_init__(self):
        if self.length < 0:
            raise FiltrationError("filtration length must be nonnegative")
        c = self.complex
        subs = {}
        for p in range(1, self.length + 1):
            for n in c.degrees:
                m = self.subspaces.get((p, n), RationalMatrix.zeros(c.dim(n), 0))
                if m.rows != c.dim(n):
                    raise FiltrationError(f"F^{p} C^{n} lives in the wrong space")
                if rank(m) != m.cols:
                    m = image_basis(m)
                subs[(p, n)] = m
        object.__setattr__(self, "subspaces", subs)

    @classmethod
    def from_weights(cls, complex: ComplexOfSpaces, weights: Sequence[Sequence[int]],
                     length: int | None = None) -> "FilteredComplex":
        """``F^p`` is spanned by the basis vectors of weight ``>= p``."""
        if len(weights) != len(complex.dims):
            raise FiltrationError("need one weight list per degree")
        flat = [w for ws in weights for w in ws]
        if any(w < 0 for w in flat):
            raise FiltrationError("weights must be nonnegative")
        if length is None:
            length = max(flat, default=0)
        subs = {}
        for k, n in enumerate(complex.degrees):
            ws = list(weights[k])
            if len(ws) != complex.dim(n):
                raise FiltrationError(f"degree {n}: {len(ws)} weights for dimension {complex.dim(n)}")
            for p in range(1, length + 1):
                idx = [i for i, w in enumerate(ws) if w >= p]
                subs[(p, n)] = RationalMatrix(complex.dim(n), len(idx),
                                              {(i, c): Fraction(1) for c, i in enumerate(idx)})
        fc = cls(complex, length, subs)
        fc.validate()
        return fc

    @classmethod
    def trivial(cls, complex: ComplexOfSpaces) -> "FilteredComplex":
        return cls(complex, 0, {})

    def sub(self, p: int, n: int) -> RationalMatrix:
        dim = self.complex.dim(n)
        if p <= 0:
            return RationalMatrix.identity(dim)
        if p > self.length or n not in self.complex.degrees:
            return RationalMatrix.zeros(dim, 0)
        return self.subspaces[(p, n)]

    def validate(self) -> None:
        c = self.complex
        c.check()
        for n in c.degrees:
            for p in range(1, self.length + 1):
                if not _contained(self.sub(p + 1, n), self.sub(p, n)):
                    raise FiltrationError(f"F^{p + 1} C^{n} is not inside F^{p} C^{n}")
                if not _contained(c.d(n) @ self.sub(p, n), self.sub(p, n + 1)):
                    raise FiltrationError(f"the differential does not preserve F^{p} in degree {n}")

    def graded_dims(self) -> dict[tuple[int, int], int]:
        """``dim F^p C^n / F^{p+1} C^n`` keyed by ``(p, n)``."""
        return {(p, n): self.sub(p, n).cols - self.sub(p + 1, n).cols
                for p in range(self.length + 1) for n in self.complex.degrees}


# subquotients --------------------------------------------------------------------

def _cycles(fc: FilteredComplex, r: int, p: int, n: int) -> RationalMatrix:
    F = fc.sub(p, n)
    if F.cols == 0:
        return F
    target = fc.sub(p + r, n + 1)
    dF = fc.complex.d(n) @ F
    if target.cols == target.rows:
        return F
    cond = dF if target.cols == 0 else left_annihilator(target) @ dF
    return F @ kernel_basis(cond)


@dataclass(frozen=True, eq=False)
class _Cell:
    """Quotient data for one ``E^{p,n}``: boundaries ``B``, representatives ``reps``."""

    boundaries: RationalMatrix
    reps: RationalMatrix

    @property
    def dim(self) -> int:
        return self.reps.cols

    def coords(self, vectors: RationalMatrix) -> RationalMatrix:
        """Class coordinates of vectors lying in ``span(B) + span(reps)``."""
        if self.dim == 0:
            return RationalMatrix.zeros(0, vectors.cols)
        basis = hstack([self.boundaries, self.reps], rows=self.reps.rows)
        full = solve_in_basis(basis, vectors)
        k = self.boundaries.cols
        return full.select_rows(range(k, k + self.dim))


def _subquotient(top: RationalMatrix, bottom: RationalMatrix) -> _Cell:
    bottom = image_basis(bottom) if bottom.cols else bottom
    if top.cols == 0:
        return _Cell(bottom, top)
    inside = solve_in_basis(top, bottom) if bottom.cols else RationalMatrix.zeros(top.cols, 0)
    reps = top @ quotient_basis(top.cols, inside)
    return _Cell(bottom, reps)


def _page_cell(fc: FilteredComplex, r: int, p: int, n: int) -> _Cell:
    top = _cycles(fc, r, p, n)
    dim = fc.complex.dim(n)
    bottom = [_cycles(fc, r - 1, p + 1, n)]
    src = _cycles(fc, r - 1, p - r + 1, n - 1)
    if src.cols:
        bottom.append(fc.complex.d(n - 1) @ src)
    return _subquotient(top, hstack(bottom, rows=dim))


@dataclass(frozen=True, eq=False)
class SpectralPage:
    """Page ``r``: dims keyed by ``(p, q)`` and ``d_r`` keyed by its source ``(p, q)``."""

    r: int
    dims: Mapping[tuple[int, int], int]
    differentials: Mapping[tuple[int, int], RationalMatrix]

    def differential_rank(self, p: int, q: int) -> int:
        m = self.differentials.get((p, q))
        return 0 if m is None else rank(m)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.differentials.values())

    def total(self, n: int) -> int:
        return sum(v for (p, q), v in self.dims.items() if p + q == n)

    def to_json(self, *, matrices: bool = False) -> dict:
        out = {
            "r": self.r,
            "entries": [{"p": p, "q": q, "dim": v} for (p, q), v in sorted(self.dims.items())],
        }
        diffs = []
        for (p, q), m in sorted(self.differentials.items()):
            if m.rows == 0 or m.cols == 0:
                continue
            rec = {"from": [p, q], "to": [p + self.r, q - self.r + 1], "rank": rank(m)}
            if matrices:
                rec["matrix"] = [[str(v) for v in row] for row in m.to_rows()]
            diffs.append(rec)
        out["differentials"] = diffs
        return out


@dataclass(frozen=True, eq=False)
class SpectralSequence:
    filtered: FilteredComplex
    pages: tuple[SpectralPage, ...]
    infinity: Mapping[tuple[int, int], int]
    cells: Mapping[int, Mapping[tuple[int, int], _Cell]] = field(repr=False, default_factory=dict)

    @property
    def stable_from(self) -> int:
        """Smallest computed ``r`` from which every later differential vanishes."""
        r = self.pages[-1].r
        for page in reversed(self.pages):
            if not page.is_zero():
                break
            r = page.r
        return r

    def page(self, r: int) -> SpectralPage:
        for pg in self.pages:
            if pg.r == r:
                return pg
        raise KeyError(f"page {r} was not computed")

    def infinity_total(self, n: int) -> int:
        return sum(v for (p, q), v in self.infinity.items() if p + q == n)


def _bidegrees(fc: FilteredComplex) -> list[tuple[int, int]]:
    return [(p, n) for p in range(fc.length + 1) for n in fc.complex.degrees]


def compute_pages(fc: FilteredComplex, r_max: int | None = None) -> SpectralSequence:
    """Pages ``E_0 .. E_R`` with ``R = min(r_max, length + 1)``, plus ``E_inf``."""
    last = fc.length + 1 if r_max is None else min(r_max, fc.length + 1)
    if last < 0:
        raise ValueError("r_max must be nonnegative")
    d = fc.complex.d
    pages, cells = [], {}
    for r in range(last + 1):
        here = {(p, n): _page_cell(fc, r, p, n) for p, n in _bidegrees(fc)}
        diffs = {}
        for (p, n), cell in here.items():
            tgt = here.get((p + r, n + 1))
            if tgt is None:
                diffs[(p, n - p)] = RationalMatrix.zeros(0, cell.dim)
                continue
            diffs[(p, n - p)] = tgt.coords(d(n) @ cell.reps)
        dims = {(p, n - p): cell.dim for (p, n), cell in here.items()}
        pages.append(SpectralPage(r, dims, diffs))
        cells[r] = here
    return SpectralSequence(fc, tuple(pages), infinity_dims(fc), cells)


def infinity_dims(fc: FilteredComplex) -> dict[tuple[int, int], int]:
    c = fc.complex
    out = {}
    for p, n in _bidegrees(fc):
        z = _cycles(fc, fc.length + 2, p, n)
        z_next = _cycles(fc, fc.length + 2, p + 1, n)
        bd = image_basis(c.d(n - 1)) if c.dim(n - 1) else RationalMatrix.zeros(c.dim(n), 0)
        bp = intersect(bd, fc.sub(p, n))
        out[(p, n - p)] = z.cols - rank(hstack([z_next, bp], rows=c.dim(n)))
    return out


# invariants ----------------------------------------------------------------------

def page_violations(ss: SpectralSequence) -> list[dict]:
    """``d_r d_r = 0`` on every page and the recursion ``dim E_{r+1} = dim H(E_r, d_r)``."""
    out = []
    for page in ss.pages:
        r = page.r
        for (p, q), m in page.differentials.items():
            nxt = page.differentials.get((p + r, q - r + 1))
            if nxt is not None and m.rows and not (nxt @ m).is_zero():
                out.append({"kind": "d_r^2", "r": r, "p": p, "q": q})
    for page, nxt in zip(ss.pages, ss.pages[1:]):
        r = page.r
        for (p, q), dim in page.dims.items():
            incoming = page.differential_rank(p - r, q + r - 1)
            outgoing = page.differential_rank(p, q)
            expected = dim - incoming - outgoing
            if nxt.dims.get((p, q), 0) != expected:
                out.append({"kind": "recursion", "r": r, "p": p, "q": q,
                            "expected": expected, "got": nxt.dims.get((p, q), 0)})
    last = ss.pages[-1]
    if last.r == ss.filtered.length + 1 and dict(last.dims) != dict(ss.infinity):
        out.append({"kind": "infinity", "r": last.r})
    return out


@dataclass(frozen=True)
class ConvergenceReport:
    passed: bool
    per_degree: Mapping[int, tuple[int, int]]
    offending: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "offending_degrees": list(self.offending),
            "degrees": [{"n": n, "sum_e_inf": a, "h": b} for n, (a, b) in sorted(self.per_degree.items())],
        }


def check_convergence(pages: Sequence[SpectralPage] | SpectralSequence | Mapping[tuple[int, int], int],
                      complex: ComplexOfSpaces) -> ConvergenceReport:
    """Compare ``sum_{p+q=n} dim E_inf^{pq}`` with ``dim H^n`` for every ``n``.

    Accepts a sequence of pages (the last one is read as ``E_inf``), a
    :class:`SpectralSequence`, or a raw ``(p, q) -> dim`` table.
    """
    if isinstance(pages, SpectralSequence):
        table = pages.infinity
    elif isinstance(pages, Mapping):
        table = pages
    else:
        table = pages[-1].dims
    h = cohomology_dims(complex)
    per = {}
    for n in complex.degrees:
        per[n] = (sum(v for (p, q), v in table.items() if p + q == n), h[n])
    stray = sorted({p + q for (p, q), v in table.items() if v and p + q not in h})
    for n in stray:
        per[n] = (sum(v for (p, q), v in table.items() if p + q == n), 0)
    bad = tuple(n for n, (a, b) in sorted(per.items()) if a != b)
    return ConvergenceReport(not bad, per, bad)


# filtered maps -----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FilteredMap:
    """Chain map ``source -> target`` with ``phi(F^p) ⊆ F^p``; ``components[n]`` acts on degree ``n``."""

    source: FilteredComplex
    target: FilteredComplex
    components: Mapping[int, RationalMatrix]

    def __post_init__(self):
        s, t = self.source.complex, self.target.complex
        comps = {}
        for n in sorted(set(s.degrees) | set(t.degrees)):
            m = self.components.get(n, RationalMatrix.zeros(t.dim(n), s.dim(n)))
            if m.shape != (t.dim(n), s.dim(n)):
                raise FilteredMapError(f"component in degree {n} has shape {m.shape}")
            comps[n] = m
        object.__setattr__(self, "components", comps)
        for n in comps:
            lhs = t.d(n) @ comps[n]
            rhs = comps.get(n + 1, RationalMatrix.zeros(t.dim(n + 1), s.dim(n + 1))) @ s.d(n)
            if lhs != rhs:
                raise FilteredMapError(f"not a chain map in degree {n}")
            for p in range(1, self.source.length + 1):
                if not _contained(comps[n] @ self.source.sub(p, n), self.target.sub(p, n)):
                    raise FilteredMapError(f"does not preserve F^{p} in degree {n}")

    def at(self, n: int) -> RationalMatrix:
        s, t = self.source.complex, self.target.complex
        return self.components.get(n, RationalMatrix.zeros(t.dim(n), s.dim(n)))

    def compose(self, first: "FilteredMap") -> "FilteredMap":
        """``self ∘ first``."""
        degs = set(first.components) | set(self.components)
        return FilteredMap(first.source, self.target, {n: self.at(n) @ first.at(n) for n in degs})

    @classmethod
    def identity(cls, fc: FilteredComplex) -> "FilteredMap":
        return cls(fc, fc, {n: RationalMatrix.identity(fc.complex.dim(n)) for n in fc.complex.degrees})


def _is_iso(m: RationalMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def _cohomology_cell(c: ComplexOfSpaces, n: int) -> _Cell:
    z = kernel_basis(c.d(n))
    b = c.d(n - 1)
    return _subquotient(z, b if b.cols else RationalMatrix.zeros(c.dim(n), 0))


@dataclass(frozen=True, eq=False)
class SpectralMap:
    pages: tuple[Mapping[tuple[int, int], RationalMatrix], ...]
    commutes: bool
    e1_iso: bool
    abutment: Mapping[int, RationalMatrix]
    abutment_iso: bool

    @property
    def implication_holds(self) -> bool:
        return self.abutment_iso or not self.e1_iso

    def to_json(self) -> dict:
        return {
            "commutes_with_differentials": self.commutes,
            "e1_isomorphism": self.e1_iso,
            "abutment_isomorphism": self.abutment_iso,
            "implication_holds": self.implication_holds,
            "abutment": [{"n": n, "source_dim": m.cols, "target_dim": m.rows, "rank": rank(m)}
                         for n, m in sorted(self.abutment.items())],
        }


def map_of_spectral_sequences(phi: FilteredMap, source_ss: SpectralSequence | None = None,
                              target_ss: SpectralSequence | None = None) -> SpectralMap:
    src = source_ss or compute_pages(phi.source)
    tgt = target_ss or compute_pages(phi.target)
    rs = [pg.r for pg in src.pages if pg.r in {t.r for t in tgt.pages}]
    page_maps = []
    commutes = True
    for r in rs:
        maps = {}
        for (p, n), cell in src.cells[r].items():
            tcell = tgt.cells[r].get((p, n))
            if tcell is None:
                maps[(p, n - p)] = RationalMatrix.zeros(0, cell.dim)
            else:
                maps[(p, n - p)] = tcell.coords(phi.at(n) @ cell.reps)
        page_maps.append(maps)
        dsrc, dtgt = src.page(r).differentials, tgt.page(r).differentials
        for (p, q), m in maps.items():
            after = maps.get((p + r, q - r + 1))
            if after is None or (p, q) not in dtgt:
                continue
            if after @ dsrc[(p, q)] != dtgt[(p, q)] @ m:
                commutes = False
    e1_iso = False
    if 1 in rs:
        e1_iso = all(_is_iso(m) for m in page_maps[rs.index(1)].values())
    degs = sorted(set(phi.source.complex.degrees) | set(phi.target.complex.degrees))
    abut = {}
    for n in degs:
        a = _cohomology_cell(phi.source.complex, n)
        b = _cohomology_cell(phi.target.complex, n)
        abut[n] = b.coords(phi.at(n) @ a.reps)
    abutment_iso = all(_is_iso(m) for m in abut.values())
    return SpectralMap(tuple(page_maps), commutes, e1_iso, abut, abutment_iso)


# random instances ----------------------------------------------------------------------

@dataclass(frozen=True)
class NormalForm:
    """Generators of a split filtered complex before the random change of basis.

    ``free`` holds ``(degree, weight)``; ``pairs`` holds
    ``(degree, source weight, target weight)`` with ``d(source) = target``.
    """

    free: tuple[tuple[int, int], ...]
    pairs: tuple[tuple[int, int, int], ...]
    length: int

    def expected_dims(self, r: int) -> dict[tuple[int, int], int]:
        """``dim E_r^{pq}``: a pair with weight gap ``g`` survives exactly while ``r <= g``."""
        out: dict[tuple[int, int], int] = {}

        def bump(p, n):
            out[(p, n - p)] = out.get((p, n - p), 0) + 1

        for n, w in self.free:
            bump(w, n)
        for n, ws, wt in self.pairs:
            if wt - ws >= r:
                bump(ws, n)
                bump(wt, n + 1)
        return out

    def expected_infinity(self) -> dict[tuple[int, int], int]:
        return self.expected_dims(self.length + 2)


def _unimodular(rng: np.random.Generator, n: int) -> RationalMatrix:
    """Random integer matrix with determinant +-1 (product of elementary moves)."""
    if n <= 1:
        return RationalMatrix.identity(n)
    a = np.eye(n, dtype=object)
    for _ in range(2 * n):
        i, j = (int(v) for v in rng.integers(0, n, size=2))
        if i != j:
            a[i] = a[i] + int(rng.integers(-2, 3)) * a[j]
    perm = rng.permutation(n)
    return RationalMatrix.from_rows([[int(v) for v in a[k]] for k in perm], cols=n)


def _inverse(m: RationalMatrix) -> RationalMatrix:
    return solve_in_basis(m, RationalMatrix.identity(m.rows))


def _assemble(start: int, gens: Sequence[list[tuple[int, int]]], edges: Sequence[tuple[int, int, int]],
              length: int, rng: np.random.Generator | None):
    """Complex on generator lists ``gens[k]`` (tag, weight) with ``d`` given by ``edges``.

    ``edges`` are ``(k, source index, target index)`` meaning
    ``d(gens[k][s]) = gens[k+1][t]``.  With ``rng`` every degree is hit by a
    random unimodular change of basis; returns the complex and the basis
    changes used.
    """
    dims = [len(g) for g in gens]
    diffs = []
    for k in range(len(dims) - 1):
        entries = {(t, s): Fraction(1) for kk, s, t in edges if kk == k}
        diffs.append(RationalMatrix(dims[k + 1], dims[k], entries))
    weights = [[w for _, w in g] for g in gens]
    base = ComplexOfSpaces(start, tuple(dims), tuple(diffs))
    fc = FilteredComplex.from_weights(base, weights, length=length)
    if rng is None:
        return fc, {n: RationalMatrix.identity(base.dim(n)) for n in base.degrees}
    changes = {n: _unimodular(rng, base.dim(n)) for n in base.degrees}
    return _change_basis(fc, changes), changes


def _change_basis(fc: FilteredComplex, changes: Mapping[int, RationalMatrix]) -> FilteredComplex:
    c = fc.complex
    inv = {n: _inverse(g) for n, g in changes.items()}
    diffs = tuple(changes[n + 1] @ c.d(n) @ inv[n] for n in list(c.degrees)[:-1])
    moved = ComplexOfSpaces(c.start, c.dims, diffs)
    subs = {(p, n): changes[n] @ fc.sub(p, n) for p in range(1, fc.length + 1) for n in c.degrees}
    return FilteredComplex(moved, fc.length, subs)


def _random_normal_form(rng: np.random.Generator, max_dim: int, max_length: int,
                        span: int) -> tuple[list[list[tuple[str, int]]], list[tuple[int, int, int]], NormalForm]:
    length = int(rng.integers(0, max_length + 1))
    gens: list[list[tuple[str, int]]] = [[] for _ in range(span)]
    edges: list[tuple[int, int, int]] = []
    free, pairs = [], []
    for k in range(span):
        for _ in range(int(rng.integers(0, 3))):
            if len(gens[k]) < max_dim:
                w = int(rng.integers(0, length + 1))
                gens[k].append(("free", w))
                free.append((k, w))
    for k in range(span - 1):
        for _ in range(int(rng.integers(0, 4))):
            if len(gens[k]) >= max_dim or len(gens[k + 1]) >= max_dim:
                break
            ws = int(rng.integers(0, length + 1))
            wt = int(rng.integers(ws, length + 1))
            gens[k].append(("src", ws))
            gens[k + 1].append(("tgt", wt))
            edges.append((k, len(gens[k]) - 1, len(gens[k + 1]) - 1))
            pairs.append((k, ws, wt))
    return gens, edges, NormalForm(tuple(free), tuple(pairs), length)


def _shuffle(rng, gens, edges):
    """Permute generators inside each degree so the normal form is not sorted."""
    perms = [list(rng.permutation(len(g))) for g in gens]
    new_gens = [[g[i] for i in perm] for g, perm in zip(gens, perms)]
    where = [{old: new for new, old in enumerate(perm)} for perm in perms]
    new_edges = [(k, where[k][s], where[k + 1][t]) for k, s, t in edges]
    return new_gens, new_edges


def random_filtered_complex(seed: int, max_dim: int = 8, max_length: int = 4,
                            max_span: int = 4) -> tuple[FilteredComplex, NormalForm]:
    """Seeded filtered complex hidden behind random bases, with its normal form."""
    rng = np.random.default_rng(seed)
    span = int(rng.integers(1, max_span + 1))
    start = int(rng.integers(-1, 2))
    gens, edges, nf = _random_normal_form(rng, max_dim, max_length, span)
    gens, edges = _shuffle(rng, gens, edges)
    nf = NormalForm(tuple((n + start, w) for n, w in nf.free),
                    tuple((n + start, a, b) for n, a, b in nf.pairs), nf.length)
    fc, _ = _assemble(start, gens, edges, nf.length, rng)
    return fc, nf


def random_e1_iso_map(seed: int, max_dim: int = 8, max_length: int = 4) -> FilteredMap:
    """Inclusion ``C -> C ⊕ A`` where ``A`` is built from weight-gap-0 pairs.

    ``A`` has acyclic graded pieces, so the induced map on ``E_1`` is an
    isomorphism.  Both sides get independent random bases.
    """
    rng = np.random.default_rng(seed)
    span = int(rng.integers(1, 4))
    half = max(max_dim // 2, 1)
    gens, edges, nf = _random_normal_form(rng, half, max_length, span)
    big = [list(g) for g in gens]
    big_edges = list(edges)
    for k in range(span - 1):
        for _ in range(int(rng.integers(1, 3))):
            if len(big[k]) >= max_dim or len(big[k + 1]) >= max_dim:
                break
            w = int(rng.integers(0, nf.length + 1))
            big[k].append(("acyclic", w))
            big[k + 1].append(("acyclic", w))
            big_edges.append((k, len(big[k]) - 1, len(big[k + 1]) - 1))
    small, g_small = _assemble(0, gens, edges, nf.length, rng)
    large, g_large = _assemble(0, big, big_edges, nf.length, rng)
    comps = {}
    for n in small.complex.degrees:
        incl = RationalMatrix(large.complex.dim(n), small.complex.dim(n),
                              {(i, i): Fraction(1) for i in range(small.complex.dim(n))})
        comps[n] = g_large[n] @ incl @ _inverse(g_small[n])
    return FilteredMap(small, large, comps)


def random_killing_map(seed: int, max_dim: int = 8, max_length: int = 4) -> FilteredMap | None:
    """Projection ``C -> C / <x>`` for a free generator ``x``; ``None`` when ``C`` has none."""
    rng = np.random.default_rng(seed)
    span = int(rng.integers(1, 4))
    gens, edges, nf = _random_normal_form(rng, max_dim, max_length, span)
    spots = [(k, i) for k, g in enumerate(gens) for i, (tag, _) in enumerate(g) if tag == "free"]
    if not spots:
        return None
    k0, i0 = spots[int(rng.integers(0, len(spots)))]
    small = [list(g) for g in gens]
    del small[k0][i0]
    keep = {k: [i for i in range(len(g)) if (k, i) != (k0, i0)] for k, g in enumerate(gens)}
    renum = {k: {old: new for new, old in enumerate(idx)} for k, idx in keep.items()}
    small_edges = [(k, renum[k][s], renum[k + 1][t]) for k, s, t in edges]
    big, g_big = _assemble(0, gens, edges, nf.length, rng)
    quo, g_quo = _assemble(0, small, small_edges, nf.length, rng)
    comps = {}
    for k in range(len(gens)):
        proj = RationalMatrix(len(small[k]), len(gens[k]),
                              {(new, old): Fraction(1) for old, new in renum[k].items()})
        comps[k] = g_quo[k] @ proj @ _inverse(g_big[k])
    return FilteredMap(big, quo, comps)


# descent spectral sequence -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DescentReport:
    """Spectral sequences of one graded slice of the Čech-type resolution.

    ``descent`` filters ``⊕(R/f_i)_d -> ⊕(R/(f_i,f_j))_d -> ...`` by position
    (column ``p`` holds the ``(p+1)``-fold intersections) and abuts to the
    slice of the union ``(R/prod f)_d``.  ``resolution`` filters the whole
    part from ``R_d`` onwards and abuts to the product ideal ``(prod f)_d``.
    """

    degree: int
    descent: SpectralSequence
    resolution: SpectralSequence
    union_dim: int
    ideal_dim: int

    def _row(self, ss: SpectralSequence) -> list[int]:
        e1 = ss.page(1) if len(ss.pages) > 1 else ss.pages[-1]
        return [e1.dims.get((p, 0), 0) for p in range(ss.filtered.length + 1)]

    @staticmethod
    def _concentrated(ss: SpectralSequence) -> bool:
        e1 = ss.page(1) if len(ss.pages) > 1 else ss.pages[-1]
        return all(v == 0 for (p, q), v in e1.dims.items() if q != 0)

    @staticmethod
    def _abutment(ss: SpectralSequence) -> list[int]:
        degs = ss.filtered.complex.degrees
        return [ss.infinity_total(n) for n in degs]

    @property
    def degenerate(self) -> bool:
        """No differential beyond ``d_1`` (the Čech differential itself) is nonzero."""
        return all(pg.is_zero() for pg in self.descent.pages if pg.r >= 2)

    @property
    def passed(self) -> bool:
        ab = self._abutment(self.descent)
        res = self._abutment(self.resolution)
        return (self._concentrated(self.descent) and self.degenerate
                and ab[:1] == [self.union_dim] and not any(ab[1:])
                and res[:1] == [self.ideal_dim] and not any(res[1:])
                and check_convergence(self.descent, self.descent.filtered.complex).passed
                and check_convergence(self.resolution, self.resolution.filtered.complex).passed)

    def to_json(self, *, pages: bool = False) -> dict:
        out = {
            "degree": self.degree,
            "descent": {
                "e1_row": self._row(self.descent),
                "concentrated_in_row_zero": self._concentrated(self.descent),
                "degenerate": self.degenerate,
                "stable_from": self.descent.stable_from,
                "abutment": self._abutment(self.descent),
                "union_dim": self.union_dim,
            },
            "resolution": {
                "e1_row": self._row(self.resolution),
                "abutment": self._abutment(self.resolution),
                "ideal_dim": self.ideal_dim,
            },
            "pass": self.passed,
        }
        if pages:
            out["descent"]["pages"] = [pg.to_json() for pg in self.descent.pages]
            out["resolution"]["pages"] = [pg.to_json() for pg in self.resolution.pages]
        return out


def descent_ss(arr: Arrangement, d: int) -> DescentReport:
    rep = check_regular_sequence(arr, d)
    if not rep.regular:
        raise RegularityError(f"divisors are not a regular sequence (witness {rep.witness})")
    from .cech import truncation_filtration

    sl = build_cech_slice(arr, d, require_regular=False)
    c = sl.complex
    upper = ComplexOfSpaces(0, c.dims[2:], c.differentials[2:])
    weights = [[k] * upper.dim(k) for k in upper.degrees]
    descent = compute_pages(FilteredComplex.from_weights(upper, weights, length=max(len(arr) - 1, 0)))
    resolution = compute_pages(truncation_filtration(sl))
    return DescentReport(d, descent, resolution, arr.ring_dim(d) - arr.ideal_dim(d), arr.ideal_dim(d))
