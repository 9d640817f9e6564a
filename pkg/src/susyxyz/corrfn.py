"""Correlation quantity f_n, the correlation triple, and the infinite-lattice
limit, assembled exactly from the tau table.

f_n is built in the zeta variable from

    f_n = (zeta^2+3)(zeta^2-3)/(zeta^2-1)^2
          - 2 zeta^2 (zeta^2+3) / ((2n+1)^2 (zeta^2-1)^2)
            * sbar_n(1/zeta^2) sbar_{-n-1}(1/zeta^2)
              / (s_n(1/zeta^2) s_{-n-1}(1/zeta^2)),

and reconstructed as a rational function of the symmetric invariant
Z = zeta^2 (zeta^2-9)^2 / (zeta^2-1)^2 by exact rational interpolation with
a final structural verification, so the interpolation details cannot affect
correctness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _int_gcd

from .exactcore import (
    Poly,
    RatFunc,
    ratfunc_compose,
    ratfunc_simplify,
    variable,
)
from .taurec import TauTable, default_table

__all__ = [
    "PoleEncountered",
    "ReconstructionFailed",
    "CorrelationTriple",
    "FnRational",
    "Z_OF_ZETA",
    "GAMMA_OF_ZETA",
    "DELTA_OF_ZETA",
    "f_zeta",
    "f_in_Z",
    "fn_pair",
    "correlations",
    "sum_rule_residual",
    "symmetry_residual",
    "f_infinity",
    "figure_rows",
]


class PoleEncountered(ArithmeticError):
    """An exact evaluation hit a vanishing denominator."""


class ReconstructionFailed(ArithmeticError):
    """No rational function of Z within the degree cap matches f_n."""


_ZETA = variable("zeta")
_Z2 = _ZETA * _ZETA

#: the normalized discriminant Z as a function of zeta
Z_OF_ZETA = ratfunc_simplify((_Z2) * (_Z2 - 9) ** 2, (_Z2 - 1) ** 2)

#: the two nontrivial solutions of Z(zeta') = Z(zeta)
GAMMA_OF_ZETA = ratfunc_simplify(_ZETA + 3, _ZETA - 1)
DELTA_OF_ZETA = ratfunc_simplify(_ZETA - 3, _ZETA + 1)


@dataclass(frozen=True)
class CorrelationTriple:
    """Nearest-neighbour correlators (exact rationals for exact input)."""

    cx: Fraction
    cy: Fraction
    cz: Fraction


@dataclass(frozen=True)
class FnRational:
    """f_n in both variables, with the composition identity verified."""

    n: int
    in_zeta: RatFunc
    in_Z: RatFunc


def _at_inv_zeta_sq(p: Poly) -> RatFunc:
    """p(1/zeta^2) as a rational function of zeta."""
    d = max(p.degree, 0)
    num = [Fraction(0)] * (2 * d + 1)
    for k, c in enumerate(p.coeffs):
        num[2 * (d - k)] = c
    den = [Fraction(0)] * (2 * d + 1)
    den[2 * d] = Fraction(1)
    return ratfunc_simplify(Poly(tuple(num), "zeta"), Poly(tuple(den), "zeta"))


_fz_cache: dict[int, RatFunc] = {}


def f_zeta(n: int, table: TauTable | None = None) -> RatFunc:
    """f_n as a fully simplified rational function of zeta."""
    if table is None:
        if n in _fz_cache:
            return _fz_cache[n]
        table = default_table()
    L2 = (2 * n + 1) ** 2
    first = ratfunc_simplify((_Z2 + 3) * (_Z2 - 3), (_Z2 - 1) ** 2)
    pref = ratfunc_simplify(2 * _Z2 * (_Z2 + 3), L2 * (_Z2 - 1) ** 2)
    ratio = (_at_inv_zeta_sq(table.sbar(n)) * _at_inv_zeta_sq(table.sbar(-n - 1))) / (
        _at_inv_zeta_sq(table.s(n)) * _at_inv_zeta_sq(table.s(-n - 1))
    )
    f = first - pref * ratio
    if table is default_table():
        _fz_cache[n] = f
    return f


# -- exact rational interpolation in Z ---------------------------------

def _sample_zetas():
    """Deterministic stream of rational zeta values in (0, 1), clear of
    {0, +-1, +-3} and of each other."""
    for b in range(3, 60):
        for a in range(1, b):
            if _int_gcd(a, b) == 1:
                yield Fraction(a, b)


def _nullspace_vector(rows: list[list[Fraction]]) -> list[Fraction] | None:
    """One nonzero rational kernel vector of the row system, if any."""
    if not rows:
        return None
    ncols = len(rows[0])
    mat = [row[:] for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    fc = free[-1]
    v = [Fraction(0)] * ncols
    v[fc] = Fraction(1)
    for row, pc in zip(mat, pivots):
        v[pc] = -row[fc]
    return v


_fZ_cache: dict[int, RatFunc] = {}


def f_in_Z(n: int) -> RatFunc:
    """f_n as a rational function of Z, verified exactly against f_zeta(n).

    The candidate comes from rational interpolation of exact sample pairs
    (Z(zeta_i), f_n(zeta_i)); degree bounds grow from (0,0) to (2n,2n).
    Composing the candidate with Z(zeta) and comparing with f_zeta(n)
    structurally is the correctness certificate.
    """
    if n in _fZ_cache:
        return _fZ_cache[n]
    fz = f_zeta(n)
    cap = max(2 * n, 1)
    samples: list[tuple[Fraction, Fraction]] = []
    seen_Z: set[Fraction] = set()
    gen = _sample_zetas()

    def take(count):
        while len(samples) < count:
            zeta = next(gen)
            try:
                Zv = Z_OF_ZETA.evaluate(zeta)
                fv = fz.evaluate(zeta)
            except ZeroDivisionError:
                continue
            if Zv in seen_Z:
                continue
            seen_Z.add(Zv)
            samples.append((Zv, fv))

    for d in range(0, cap + 1):
        take(2 * d + 4)
        rows = []
        for Zv, fv in samples[: 2 * d + 4]:
            powers = [Zv**k for k in range(d + 1)]
            rows.append(powers + [-fv * p for p in powers])
        v = _nullspace_vector(rows)
        if v is None:
            continue
        num = Poly(tuple(v[: d + 1]), "Z")
        den = Poly(tuple(v[d + 1 :]), "Z")
        if den.is_zero():
            continue
        cand = ratfunc_simplify(num, den)
        if ratfunc_compose(cand, Z_OF_ZETA) == fz:
            _fZ_cache[n] = cand
            return cand
    raise ReconstructionFailed(
        f"no rational function of Z with degrees <= {cap} matches f_{n}"
    )


def fn_pair(n: int) -> FnRational:
    """Both representations of f_n, with the defining invariants checked."""
    fz = f_zeta(n)
    fZ = f_in_Z(n)
    if ratfunc_compose(fZ, Z_OF_ZETA) != fz:
        raise ReconstructionFailed(f"composition identity fails for n={n}")
    return FnRational(n=n, in_zeta=fz, in_Z=fZ)


def correlations(n: int, zeta: Fraction) -> CorrelationTriple:
    """Exact correlation triple at anisotropy parameter zeta."""
    zeta = Fraction(zeta)
    try:
        f = f_zeta(n).evaluate(zeta)
    except ZeroDivisionError as exc:
        raise PoleEncountered(f"f_{n} has a pole at zeta={zeta}") from exc
    s = zeta * zeta + 3
    return CorrelationTriple(
        cx=1 - (1 - zeta) ** 2 * f / s,
        cy=1 - (1 + zeta) ** 2 * f / s,
        cz=1 - 4 * f / s,
    )


def sum_rule_residual(triple: CorrelationTriple, zeta: Fraction) -> Fraction:
    """Energy sum rule: (1+z)cx + (1-z)cy + (z^2-1)/2 cz - (z^2+3)/2."""
    zeta = Fraction(zeta)
    return (
        (1 + zeta) * triple.cx
        + (1 - zeta) * triple.cy
        + (zeta * zeta - 1) / 2 * triple.cz
        - (zeta * zeta + 3) / 2
    )


def symmetry_residual(n: int) -> Poly:
    """Numerator of f_n(zeta) - f_n((zeta+3)/(zeta-1)); must be zero."""
    fz = f_zeta(n)
    diff = fz - ratfunc_compose(fz, GAMMA_OF_ZETA)
    return diff.num


def f_infinity(zeta):
    """Infinite-lattice limit of f_n, evaluated piecewise by regime.

    Accepts Fraction (exact result) or float.  The three regime formulas
    agree at the boundary points, so the function is continuous.
    """
    z2 = zeta * zeta
    if zeta <= -3 or zeta >= 3:
        return (z2 + 3) * (z2 - 3) / (z2 - 1) ** 2
    if zeta <= 0:
        return -(z2 + 3) * (z2 + 6 * zeta - 3) / (8 * (zeta - 1) ** 2)
    return -(z2 + 3) * (z2 - 6 * zeta - 3) / (8 * (zeta + 1) ** 2)


def figure_rows(ns: list[int], zmin: float, zmax: float, steps: int) -> list[list[float]]:
    """Rows (zeta, f_n1, ..., f_nk, f_inf) sampling the plotted curves."""
    fns = [f_zeta(n) for n in ns]
    rows = []
    for i in range(steps):
        zeta = zmin + (zmax - zmin) * i / (steps - 1) if steps > 1 else zmin
        row = [zeta]
        for f in fns:
            try:
                row.append(float(f.evaluate(zeta)))
            except ZeroDivisionError:
                row.append(float("nan"))
        row.append(float(f_infinity(zeta)))
        rows.append(row)
    return rows
