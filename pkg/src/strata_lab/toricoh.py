"""Line-bundle cohomology dimensions on P^1, P^n and P^1 x P^1.

Everything is closed form: binomial counts on projective space, Serre
duality for the top degree, and the Künneth product for P^1 x P^1.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .parallel import ordered_map

SPACES = ("P1", "Pn", "P1xP1")


@dataclass(frozen=True)
class LineBundle:
    """``O(twist)`` on ``space``; ``n`` is the dimension of ``Pn``."""

    space: str
    twist: int | tuple[int, int]
    n: int = 1

    def __post_init__(self):
        if self.space not in SPACES:
            raise ValueError(f"unknown space {self.space!r}")
        if self.n < 1:
            raise ValueError("projective dimension must be at least 1")
        if self.space == "P1xP1":
            if not (isinstance(self.twist, tuple) and len(self.twist) == 2):
                raise ValueError("P1xP1 needs a bidegree")
        elif not isinstance(self.twist, int):
            raise ValueError(f"{self.space} needs an integer twist")

    @classmethod
    def p1(cls, d: int) -> "LineBundle":
        return cls("P1", d)

    @classmethod
    def pn(cls, n: int, d: int) -> "LineBundle":
        return cls("Pn", d, n)

    @classmethod
    def p1xp1(cls, a: int, b: int) -> "LineBundle":
        return cls("P1xP1", (a, b))


def _pn(n: int, d: int, i: int) -> int:
    if i == 0:
        return comb(d + n, n) if d >= 0 else 0
    if i == n:
        return comb(-d - 1, n) if d <= -n - 1 else 0
    return 0


def h_dim(bundle: LineBundle, i: int) -> int:
    if i < 0:
        raise ValueError("cohomological degree must be nonnegative")
    if bundle.space == "P1":
        return _pn(1, bundle.twist, i)
    if bundle.space == "Pn":
        return _pn(bundle.n, bundle.twist, i)
    a, b = bundle.twist
    return sum(_pn(1, a, j) * _pn(1, b, i - j) for j in range(i + 1))


def h_vector(bundle: LineBundle) -> tuple[int, ...]:
    top = {"P1": 1, "Pn": bundle.n, "P1xP1": 2}[bundle.space]
    return tuple(h_dim(bundle, i) for i in range(top + 1))


# appendix tables --------------------------------------------------------------

@dataclass(frozen=True)
class GradedTable:
    """Rows ``(d, h^0, h^1, ...)`` of a direct sum over ``d = 0..d_max``."""

    name: str
    d_max: int
    rows: tuple[tuple[int, ...], ...]

    def column(self, i: int) -> tuple[int, ...]:
        return tuple(r[i + 1] for r in self.rows)

    def total(self, i: int) -> int:
        return sum(self.column(i))

    def to_json(self) -> dict:
        width = len(self.rows[0]) - 1 if self.rows else 0
        return {
            "name": self.name,
            "truncated_at": self.d_max,
            "rows": [{"d": r[0], **{f"h{i}": r[i + 1] for i in range(width)}} for r in self.rows],
            "totals": {f"h{i}": self.total(i) for i in range(width)},
        }


def _check_dmax(d_max: int) -> None:
    if d_max < 0:
        raise ValueError("d_max must be nonnegative")


def blp2lines_table(d_max: int) -> GradedTable:
    """``H^i`` of the blown-up plane twisted by minus the strict transforms, graded by fibre degree."""
    _check_dmax(d_max)
    rows = tuple((d, h_dim(LineBundle.p1(d - 2), 0), h_dim(LineBundle.p1(d - 2), 1))
                 for d in range(d_max + 1))
    return GradedTable("blp-2lines", d_max, rows)


def pn_blowup_table(n: int, d_max: int) -> GradedTable:
    """Same computation for a point blown up in ``A^n`` with ``n`` coordinate hyperplanes.

    The fibre-degree ``d`` piece is ``O(d - n)`` on ``P^{n-1}``; only ``h^0`` and
    the top ``h^{n-1}`` can be nonzero.
    """
    _check_dmax(d_max)
    if n < 2:
        raise ValueError("need n >= 2")
    rows = tuple((d, h_dim(LineBundle.pn(n - 1, d - n), 0), h_dim(LineBundle.pn(n - 1, d - n), n - 1))
                 for d in range(d_max + 1))
    return GradedTable(f"pn-blowup-{n}", d_max, rows)


def top_cohomology_of_exceptional(n: int) -> int:
    """``h^{n-1}(P^{n-1}, O(-n))``."""
    return h_dim(LineBundle.pn(n - 1, -n), n - 1)


def atiyah_table(d_max: int) -> GradedTable:
    """Degree pieces of the small resolution's pushforward: ``(s0 s1)_d ⊗ O_{P^1_t}(d - 1)``.

    ``dim (s0 s1)_d = max(d - 1, 0)`` and the twist is ``d - 1``, so ``h^1`` never
    appears for ``d >= 0``.
    """
    _check_dmax(d_max)
    rows = []
    for d in range(d_max + 1):
        mult = max(d - 1, 0)
        line = LineBundle.p1(d - 1)
        rows.append((d, mult * h_dim(line, 0), mult * h_dim(line, 1)))
    return GradedTable("atiyah", d_max, tuple(rows))


# cone rationality ----------------------------------------------------------------

@dataclass(frozen=True)
class ConeScenario:
    polarization: tuple[int, int]
    boundary: tuple[int, int]
    d_max: int

    def __post_init__(self):
        if min(self.polarization) < 1:
            raise ValueError("polarization must be ample (both degrees >= 1)")
        _check_dmax(self.d_max)


@dataclass(frozen=True)
class ConeVerdict:
    holds: bool
    failure: tuple[int, int, int] | None
    rows: tuple[tuple[int, int, int], ...]

    def to_json(self) -> dict:
        out = {
            "verdict": "holds" if self.holds else "fails",
            "rows": [{"d": d, "h1": a, "h2": b} for d, a, b in self.rows],
        }
        if self.failure is not None:
            d, i, dim = self.failure
            out["failure"] = {"d": d, "i": i, "dim": dim}
        return out


def cone_rationality_check(sc: ConeScenario) -> ConeVerdict:
    """``h^1`` and ``h^2`` of ``O(d L - B)`` on P^1 x P^1 for ``d = 0..d_max``."""
    (la, lb), (ba, bb) = sc.polarization, sc.boundary

    def row(d):
        line = LineBundle.p1xp1(d * la - ba, d * lb - bb)
        return d, h_dim(line, 1), h_dim(line, 2)

    rows = tuple(ordered_map(row, range(sc.d_max + 1)))
    for d, a, b in rows:
        for i, dim in ((1, a), (2, b)):
            if dim:
                return ConeVerdict(False, (d, i, dim), rows)
    return ConeVerdict(True, None, rows)
