"""Finite semi-simplicial sets, gluing on simplices, and dual complexes.

A cell of dimension ``i >= 1`` carries its face tuple ``(d_0 x, ..., d_i x)``.
Face maps must satisfy ``d_k d_l = d_{l-1} d_k`` for ``k < l``.  Identifiers
are opaque strings, unique per dimension, and always listed in lexicographic
order so every output is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Mapping, Sequence

from . import poly as P
from .cech import Arrangement


class SemiSimplicialError(ValueError):
    pass


class GlueError(SemiSimplicialError):
    pass


class DualComplexError(SemiSimplicialError):
    pass


class CorrespondenceError(SemiSimplicialError):
    pass


@dataclass(frozen=True)
class Violation:
    dimension: int
    cell: str
    index: tuple[int, ...]
    kind: str

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "cell": self.cell, "index": list(self.index), "kind": self.kind}


@dataclass(frozen=True, eq=False)
class SemiSimplicialSet:
    cells: tuple[tuple[str, ...], ...]
    faces: Mapping[int, Mapping[str, tuple[str, ...]]] = field(default_factory=dict)
    augmentation: Mapping[str, str] | None = None
    support: Mapping[tuple[int, str], tuple[str, ...]] | None = None

    def __post_init__(self):
        cells = tuple(tuple(sorted(c)) for c in self.cells)
        object.__setattr__(self, "cells", cells)
        faces = {int(i): {x: tuple(f) for x, f in fm.items()} for i, fm in self.faces.items()}
        object.__setattr__(self, "faces", faces)
        if self.augmentation is not None:
            object.__setattr__(self, "augmentation", dict(self.augmentation))
        if self.support is not None:
            object.__setattr__(self, "support", {k: tuple(v) for k, v in self.support.items()})

    @classmethod
    def from_faces(cls, vertices: Sequence[str], *higher: Mapping[str, Sequence[str]],
                   **kwargs) -> "SemiSimplicialSet":
        """``from_faces(["a", "b"], {"e": ("b", "a")})`` builds a single edge."""
        cells = [tuple(vertices)] + [tuple(m) for m in higher]
        faces = {i + 1: dict(m) for i, m in enumerate(higher)}
        return cls(tuple(cells), faces, **kwargs)

    @property
    def dim_bound(self) -> int:
        return len(self.cells) - 1

    def cells_of(self, i: int) -> tuple[str, ...]:
        return self.cells[i] if 0 <= i < len(self.cells) else ()

    def face(self, i: int, x: str, k: int) -> str:
        return self.faces[i][x][k]

    def n_cells(self) -> int:
        return sum(len(c) for c in self.cells)

    def cell_support(self, i: int, x: str) -> tuple[str, ...]:
        if self.support is not None and (i, x) in self.support:
            return self.support[(i, x)]
        if ":" in x:
            return tuple(x.rsplit(":", 1)[0].split(","))
        raise CorrespondenceError(f"cell {x!r} of dimension {i} has no divisor support")

    def __eq__(self, other) -> bool:
        if not isinstance(other, SemiSimplicialSet):
            return NotImplemented
        return (self.cells == other.cells and self.faces == other.faces
                and self.augmentation == other.augmentation)

    __hash__ = None

    def to_json(self) -> dict:
        return {
            "dim_bound": self.dim_bound,
            "cells": {str(i): list(c) for i, c in enumerate(self.cells)},
            "faces": {str(i): {x: list(self.faces[i][x]) for x in self.cells[i]}
                      for i in range(1, len(self.cells))},
        }


@dataclass(frozen=True)
class SSMap:
    """Dimensionwise cell maps ``source -> target``."""

    source: SemiSimplicialSet
    target: SemiSimplicialSet
    maps: Mapping[int, Mapping[str, str]]

    def commutes(self) -> bool:
        for i in range(1, self.source.dim_bound + 1):
            for x in self.source.cells_of(i):
                y = self.maps[i][x]
                for k in range(i + 1):
                    if self.target.face(i, y, k) != self.maps[i - 1][self.source.face(i, x, k)]:
                        return False
        return True

    def is_isomorphism(self) -> bool:
        if self.source.dim_bound != self.target.dim_bound:
            return False
        for i in range(self.source.dim_bound + 1):
            m = self.maps.get(i, {})
            if set(m) != set(self.source.cells_of(i)):
                return False
            if sorted(m.values()) != sorted(self.target.cells_of(i)):
                return False
        return self.commutes()


# validation ---------------------------------------------------------------------

def validate(s: SemiSimplicialSet) -> list[Violation]:
    out: list[Violation] = []
    for i, cells in enumerate(s.cells):
        seen = set()
        for x in cells:
            if x in seen:
                out.append(Violation(i, x, (), "duplicate identifier"))
            seen.add(x)
    for i in range(1, len(s.cells)):
        below = set(s.cells[i - 1])
        fm = s.faces.get(i, {})
        for x in s.cells[i]:
            fs = fm.get(x)
            if fs is None:
                out.append(Violation(i, x, (), "missing faces"))
                continue
            if len(fs) != i + 1:
                out.append(Violation(i, x, (), f"expected {i + 1} faces, got {len(fs)}"))
                continue
            for k, y in enumerate(fs):
                if y not in below:
                    out.append(Violation(i, x, (k,), f"face names unknown {i - 1}-cell {y!r}"))
        for x in fm:
            if x not in set(s.cells[i]):
                out.append(Violation(i, x, (), "faces given for an unknown cell"))
    if s.augmentation is not None:
        for v in s.cells_of(0):
            if v not in s.augmentation:
                out.append(Violation(0, v, (), "missing augmentation"))
    if out:
        return out
    for i in range(2, len(s.cells)):
        for x in s.cells[i]:
            for k, l in combinations(range(i + 1), 2):
                lhs = s.face(i - 1, s.face(i, x, l), k)
                rhs = s.face(i - 1, s.face(i, x, k), l - 1)
                if lhs != rhs:
                    out.append(Violation(i, x, (k, l), "semi-simplicial identity"))
    if s.augmentation is not None and len(s.cells) > 1:
        for x in s.cells[1]:
            a, b = (s.augmentation[y] for y in s.faces[1][x])
            if a != b:
                out.append(Violation(1, x, (0, 1), "augmentation"))
    return out


# skeleta, equalizers, gluing ----------------------------------------------------------

def skeleton(s: SemiSimplicialSet, i: int) -> SemiSimplicialSet:
    if not -1 <= i <= s.dim_bound:
        raise SemiSimplicialError(f"skeleton index {i} outside [-1, {s.dim_bound}]")
    support = None
    if s.support is not None:
        support = {k: v for k, v in s.support.items() if k[0] <= i}
    return SemiSimplicialSet(s.cells[: i + 1], {j: s.faces[j] for j in range(1, i + 1)},
                             s.augmentation if i >= 0 else None, support)


def _compatible(t: SemiSimplicialSet, i: int, tup: Sequence[str], k: int) -> bool:
    """Check ``d_j(x_k) == d_{k-1}(x_j)`` for all ``j < k`` (faces of (i-1)-cells)."""
    if i == 1:
        if t.augmentation is None:
            return True
        return all(t.augmentation[tup[k]] == t.augmentation[tup[j]] for j in range(k))
    for j in range(k):
        if t.face(i - 1, tup[k], j) != t.face(i - 1, tup[j], k - 1):
            return False
    return True


def _iter_equalizer(t: SemiSimplicialSet, i: int) -> Iterator[tuple[str, ...]]:
    pool = t.cells_of(i - 1)
    tup: list[str] = []

    def rec(k):
        if k == i + 1:
            yield tuple(tup)
            return
        for x in pool:
            tup.append(x)
            if _compatible(t, i, tup, k):
                yield from rec(k + 1)
            tup.pop()

    yield from rec(0)


def equalizer(t: SemiSimplicialSet, i: int) -> list[tuple[str, ...]]:
    """All ``(x_0..x_i)`` of ``(i-1)``-cells with ``d_j x_k = d_{k-1} x_j`` for ``j < k``.

    Lexicographic order in the cell identifiers.
    """
    if i < 1:
        raise SemiSimplicialError("equalizer needs i >= 1")
    if t.dim_bound != i - 1:
        raise SemiSimplicialError(f"expected a {i - 1}-truncated object, got dim_bound {t.dim_bound}")
    return list(_iter_equalizer(t, i))


def in_equalizer(t: SemiSimplicialSet, i: int, tup: Sequence[str]) -> bool:
    if len(tup) != i + 1 or any(x not in set(t.cells_of(i - 1)) for x in tup):
        return False
    return all(_compatible(t, i, tup, k) for k in range(1, i + 1))


def glue(t: SemiSimplicialSet, top_cells: Sequence[str],
         attach: Mapping[str, Sequence[str]]) -> SemiSimplicialSet:
    """Attach new top-dimensional cells along points of the equalizer."""
    i = t.dim_bound + 1
    if i < 1:
        raise GlueError("cannot glue cells onto the empty (-1)-truncated object")
    if len(set(top_cells)) != len(top_cells):
        raise GlueError("duplicate top cell identifiers")
    if set(attach) != set(top_cells):
        raise GlueError("attach map must cover exactly the top cells")
    for y in top_cells:
        if not in_equalizer(t, i, tuple(attach[y])):
            raise GlueError(f"attaching tuple of {y!r} is not in the equalizer")
    faces = dict(t.faces)
    faces[i] = {y: tuple(attach[y]) for y in top_cells}
    support = None if t.support is None else dict(t.support)
    return SemiSimplicialSet(t.cells + (tuple(top_cells),), faces, t.augmentation, support)


def top_cells(s: SemiSimplicialSet) -> tuple[tuple[str, ...], dict[str, tuple[str, ...]]]:
    """The top-dimensional cells and their face tuples (the attaching data)."""
    i = s.dim_bound
    if i < 1:
        return s.cells_of(i), {}
    return s.cells[i], {y: s.faces[i][y] for y in s.cells[i]}


# isomorphisms ---------------------------------------------------------------------

def _coface_counts(s: SemiSimplicialSet) -> dict[tuple[int, str], int]:
    counts = {(i, x): 0 for i, c in enumerate(s.cells) for x in c}
    for i in range(1, len(s.cells)):
        for x in s.cells[i]:
            for y in s.faces[i][x]:
                counts[(i - 1, y)] += 1
    return counts


def find_isomorphism(s: SemiSimplicialSet, t: SemiSimplicialSet, *,
                     key_s=None, key_t=None,
                     fixed: Mapping[tuple[int, str], str] | None = None,
                     face_order=None) -> SSMap | None:
    """Search for an isomorphism ``s -> t`` respecting optional cell keys.

    ``key_s(i, x)`` and ``key_t(i, y)`` must agree on matched cells; ``fixed``
    pins some cells in advance.  ``face_order(i, x, y)`` may return a
    permutation ``perm`` so that face ``k`` of ``x`` is matched with face
    ``perm[k]`` of ``y`` (default: the identity).  Cells are assigned top-down
    so that choosing a cell forces its faces.
    """
    if s.dim_bound != t.dim_bound:
        return None
    if any(len(a) != len(b) for a, b in zip(s.cells, t.cells)):
        return None
    cs, ct = _coface_counts(s), _coface_counts(t)
    ks = key_s or (lambda i, x: None)
    kt = key_t or (lambda i, y: None)
    fwd: dict[tuple[int, str], str] = {}
    used: dict[tuple[int, str], str] = {}

    def assign(i, x, y, log) -> bool:
        have = fwd.get((i, x))
        if have is not None:
            return have == y
        if (i, y) in used:
            return False
        if cs[(i, x)] != ct[(i, y)] or ks(i, x) != kt(i, y):
            return False
        fwd[(i, x)] = y
        used[(i, y)] = x
        log.append((i, x, y))
        if i >= 1:
            fys = t.faces[i][y]
            perm = face_order(i, x, y) if face_order else range(i + 1)
            for fx, k in zip(s.faces[i][x], perm):
                if not assign(i - 1, fx, fys[k], log):
                    return False
        return True

    def undo(log):
        for i, x, y in log:
            del fwd[(i, x)]
            del used[(i, y)]

    start: list = []
    for (i, x), y in (fixed or {}).items():
        if not assign(i, x, y, start):
            return None
    order = [(i, x) for i in range(s.dim_bound, -1, -1) for x in s.cells[i]]

    def rec(pos) -> bool:
        while pos < len(order) and order[pos] in fwd:
            pos += 1
        if pos == len(order):
            return True
        i, x = order[pos]
        for y in t.cells[i]:
            if (i, y) in used:
                continue
            log: list = []
            if assign(i, x, y, log) and rec(pos + 1):
                return True
            undo(log)
        return False

    if not rec(0):
        return None
    maps = {i: {x: fwd[(i, x)] for x in s.cells[i]} for i in range(s.dim_bound + 1)}
    return SSMap(s, t, maps)


def is_isomorphic(s: SemiSimplicialSet, t: SemiSimplicialSet) -> bool:
    return find_isomorphism(s, t) is not None


# dual complexes --------------------------------------------------------------------

def _cell_id(labels: Sequence[str], component: int = 0) -> str:
    return f"{','.join(labels)}:{component}"


def dual_complex(arr: Arrangement) -> SemiSimplicialSet:
    """p-cells are strata of (p+1)-fold intersections; faces drop one divisor."""
    if arr.strata_mode == "auto":
        return _dual_auto(arr)
    return _dual_explicit(arr)


def _dual_auto(arr: Arrangement) -> SemiSimplicialSet:
    for dv in arr.divisors:
        if dv.poly is None or P.coordinate_variable(dv.poly) is None:
            raise DualComplexError(
                f"auto strata need coordinate hyperplanes; {dv.label} is not one "
                "(supply explicit strata instead)"
            )
    labels = arr.labels
    N = len(labels)
    cells, faces, support = [], {}, {}
    for p in range(N):
        layer = []
        for J in combinations(range(N), p + 1):
            lab = tuple(labels[j] for j in J)
            x = _cell_id(lab)
            layer.append(x)
            support[(p, x)] = lab
            if p >= 1:
                faces.setdefault(p, {})[x] = tuple(_cell_id(lab[:k] + lab[k + 1:]) for k in range(p + 1))
        cells.append(tuple(layer))
    return SemiSimplicialSet(tuple(cells), faces, None, support)


def _dual_explicit(arr: Arrangement) -> SemiSimplicialSet:
    by_id = {}
    for st in arr.strata:
        if st.id in by_id:
            raise DualComplexError(f"duplicate stratum {st.id}")
        by_id[st.id] = st
    top = max((len(st.support) for st in arr.strata), default=0)
    cells = [[] for _ in range(top)]
    faces: dict[int, dict[str, tuple[str, ...]]] = {}
    support = {}
    for st in arr.strata:
        p = len(st.support) - 1
        cells[p].append(st.id)
        support[(p, st.id)] = st.support
        if p == 0:
            continue
        for ref in st.contained_in:
            if ref not in by_id:
                raise DualComplexError(f"stratum {st.id} is contained in unknown stratum {ref!r}")
        fs = []
        for k in range(p + 1):
            sub = st.support[:k] + st.support[k + 1:]
            cands = [r for r in st.contained_in if by_id[r].support == sub]
            if not cands and not st.contained_in:
                cands = [o.id for o in arr.strata if o.support == sub]
            if len(cands) != 1:
                what = "no" if not cands else "ambiguous"
                raise DualComplexError(f"stratum {st.id} has {what} containing stratum over {','.join(sub)}")
            fs.append(cands[0])
        faces.setdefault(p, {})[st.id] = tuple(fs)
    s = SemiSimplicialSet(tuple(tuple(c) for c in cells), faces, None, support)
    bad = validate(s)
    if bad:
        v = bad[0]
        raise DualComplexError(f"containment relations are incoherent at {v.cell} {v.index}: {v.kind}")
    return s


# thriftiness -------------------------------------------------------------------------

@dataclass(frozen=True)
class StratumCorrespondence:
    labels: Mapping[str, str]
    strata: Mapping[str, str] | None = None

    def inverse(self) -> "StratumCorrespondence":
        inv = {v: k for k, v in self.labels.items()}
        strata = None if self.strata is None else {v: k for k, v in self.strata.items()}
        return StratumCorrespondence(inv, strata)

    @classmethod
    def identity(cls, s: SemiSimplicialSet) -> "StratumCorrespondence":
        labs = sorted({lab for x in s.cells_of(0) for lab in s.cell_support(0, x)})
        return cls({lab: lab for lab in labs})


@dataclass(frozen=True)
class ThriftVerdict:
    thrifty: bool
    witness: dict | None = None
    isomorphism: SSMap | None = None

    @property
    def verdict(self) -> str:
        return "thrifty" if self.thrifty else "not_thrifty"

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "witness": self.witness}
        if self.isomorphism is not None:
            out["cell_map"] = {str(i): dict(sorted(m.items())) for i, m in self.isomorphism.maps.items()}
        return out


def _check_correspondence(src: SemiSimplicialSet, tgt: SemiSimplicialSet, corr: StratumCorrespondence):
    labs = corr.labels
    if len(set(labs.values())) != len(labs):
        raise CorrespondenceError("label map is not injective")
    src_labels = {lab for i in range(src.dim_bound + 1) for x in src.cells_of(i)
                  for lab in src.cell_support(i, x)}
    tgt_labels = {lab for i in range(tgt.dim_bound + 1) for x in tgt.cells_of(i)
                  for lab in tgt.cell_support(i, x)}
    missing = sorted(src_labels - set(labs))
    if missing:
        raise CorrespondenceError(f"label map misses source labels {missing}")
    stray = sorted(tgt_labels - set(labs.values()))
    if stray:
        raise CorrespondenceError(f"label map misses target labels {stray}")
    if corr.strata is not None:
        if len(set(corr.strata.values())) != len(corr.strata):
            raise CorrespondenceError("stratum map is not injective")


def check_thrifty(source: SemiSimplicialSet, target: SemiSimplicialSet,
                  corr: StratumCorrespondence) -> ThriftVerdict:
    """Does the label correspondence extend to an isomorphism of dual complexes?

    Faces are matched by the divisor they drop, so the verdict does not
    depend on the order in which either side lists its divisors.
    """
    _check_correspondence(source, target, corr)
    labs = corr.labels

    def key_s(i, x):
        return frozenset(labs[lab] for lab in source.cell_support(i, x))

    def key_t(i, y):
        return frozenset(target.cell_support(i, y))

    fixed = None
    if corr.strata is not None:
        dim_s = {x: i for i in range(source.dim_bound + 1) for x in source.cells_of(i)}
        dim_t = {y: i for i in range(target.dim_bound + 1) for y in target.cells_of(i)}
        fixed = {}
        for x, y in corr.strata.items():
            if x not in dim_s or y not in dim_t:
                raise CorrespondenceError(f"stratum map names unknown cells {x!r} -> {y!r}")
            if dim_s[x] != dim_t[y]:
                raise CorrespondenceError(f"stratum map pairs cells of different dimension: {x!r} -> {y!r}")
            fixed[(dim_s[x], x)] = y

    def face_order(i, x, y):
        # face k drops the k-th divisor of the support; match it by label
        tgt = target.cell_support(i, y)
        return [tgt.index(labs[lab]) for lab in source.cell_support(i, x)]

    iso = find_isomorphism(source, target, key_s=key_s, key_t=key_t, fixed=fixed, face_order=face_order)
    if iso is not None:
        return ThriftVerdict(True, None, iso)
    return ThriftVerdict(False, _greedy_witness(source, target, key_s, key_t, corr.strata or {}, face_order))


def _greedy_witness(source, target, key_s, key_t, pinned, face_order) -> dict:
    fwd: dict[tuple[int, str], str] = {}
    top = max(source.dim_bound, target.dim_bound)
    for i in range(top + 1):
        free = list(target.cells_of(i))
        unmatched = []
        for x in source.cells_of(i):
            partner = None
            for y in free:
                if x in pinned and pinned[x] != y:
                    continue
                if key_s(i, x) != key_t(i, y):
                    continue
                if i >= 1:
                    fys = target.faces[i][y]
                    perm = face_order(i, x, y)
                    if any(fwd.get((i - 1, fx)) != fys[k] for fx, k in zip(source.faces[i][x], perm)):
                        continue
                partner = y
                break
            if partner is None:
                unmatched.append(x)
            else:
                free.remove(partner)
                fwd[(i, x)] = partner
        if unmatched:
            return {"side": "source", "dimension": i, "cell": unmatched[0]}
        if free:
            return {"side": "target", "dimension": i, "cell": free[0]}
    return {"side": "source", "dimension": -1, "cell": None}
