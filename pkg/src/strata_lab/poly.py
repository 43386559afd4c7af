"""Sparse polynomials with rational coefficients and graded monomial bases.

A polynomial is a dict ``exponent tuple -> Fraction``.  Text parsing and the
squarefree test go through sympy, which is imported lazily so the closed-form
commands never pay for it.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

Poly = Mapping[tuple[int, ...], Fraction]


class PolynomialError(ValueError):
    pass


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of total degree ``degree``, lexicographically descending.

    Within one degree this is graded lex on the declared variable order, so
    ``x^2 > x*y > x*z > y^2 > ...``.
    """
    if degree < 0:
        return ()
    if nvars == 0:
        return ((),) if degree == 0 else ()
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars: int, degree: int) -> dict[tuple[int, ...], int]:
    return {m: i for i, m in enumerate(monomials(nvars, degree))}


def count_monomials(nvars: int, degree: int) -> int:
    return len(monomials(nvars, degree))


def mul(a: Poly, b: Poly) -> dict[tuple[int, ...], Fraction]:
    out: dict[tuple[int, ...], Fraction] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def product(polys: Sequence[Poly], nvars: int) -> dict[tuple[int, ...], Fraction]:
    acc: dict[tuple[int, ...], Fraction] = {(0,) * nvars: Fraction(1)}
    for p in polys:
        acc = mul(acc, p)
    return acc


def degree(p: Poly) -> int:
    if not p:
        raise PolynomialError("the zero polynomial has no degree")
    return max(sum(e) for e in p)


def is_homogeneous(p: Poly) -> bool:
    return len({sum(e) for e in p}) == 1


def shift(p: Poly, mono: tuple[int, ...]) -> dict[tuple[int, ...], Fraction]:
    return {tuple(x + y for x, y in zip(e, mono)): c for e, c in p.items()}


def normalized(p: Poly) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    """Scale so the leading (lex-largest) coefficient is 1; used for proportionality."""
    lead = max(p)
    c = p[lead]
    return tuple(sorted((e, v / c) for e, v in p.items()))


def proportional(a: Poly, b: Poly) -> bool:
    return normalized(a) == normalized(b)


def coordinate_variable(p: Poly) -> int | None:
    """Index ``k`` if ``p`` is ``c * x_k``, else ``None``."""
    if len(p) != 1:
        return None
    (e,) = p
    if sum(e) != 1:
        return None
    return e.index(1)


def parse(text: str, variables: Sequence[str]) -> dict[tuple[int, ...], Fraction]:
    """Parse infix text such as ``"3/2*x*y - z"`` over the given variables."""
    import sympy
    from sympy.parsing.sympy_parser import parse_expr, standard_transformations

    syms = list(sympy.symbols(list(variables)))
    local = dict(zip(variables, syms))
    try:
        expr = parse_expr(text.replace("^", "**"), local_dict=local,
                          transformations=standard_transformations, evaluate=True)
    except Exception as exc:  # sympy raises a zoo of exception types
        raise PolynomialError(f"cannot parse polynomial {text!r}: {exc}") from None
    stray = expr.free_symbols - set(syms)
    if stray:
        raise PolynomialError(f"unknown symbols {sorted(map(str, stray))} in {text!r}")
    try:
        poly = sympy.Poly(expr, *syms, domain="QQ")
    except Exception as exc:
        raise PolynomialError(f"{text!r} is not a polynomial with rational coefficients: {exc}") from None
    out = {}
    for exps, coeff in poly.terms():
        q = sympy.Rational(coeff)
        out[tuple(int(e) for e in exps)] = Fraction(int(q.p), int(q.q))
    return {e: c for e, c in out.items() if c}


def is_squarefree(p: Poly, nvars: int) -> bool:
    if coordinate_variable(p) is not None:
        return True
    import sympy

    syms = sympy.symbols(f"v0:{nvars}")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s**k for s, k in zip(syms, e)])
               for e, c in p.items())
    _, factors = sympy.factor_list(expr, *syms)
    return all(mult == 1 for _, mult in factors)


def to_text(p: Poly, variables: Sequence[str]) -> str:
    if not p:
        return "0"
    parts = []
    for e in sorted(p, reverse=True):
        c = p[e]
        mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(variables, e) if k)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append(f"-{mono}")
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")
