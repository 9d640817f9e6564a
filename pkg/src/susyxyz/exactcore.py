"""Exact arithmetic substrate: big rationals, dense univariate polynomials,
and normalized rational functions.

Every symbolic computation in this package reduces to arithmetic in Q[x] or
Q(x).  Polynomials are dense tuples of ``Fraction`` coefficients in ascending
degree; rational functions are kept fully cancelled with a monic denominator,
so equality of values is equality of representations.

Scalars are ``fractions.Fraction`` (exported as ``ExactRational``): the
stdlib type already guarantees the reduced-form invariants (coprime
numerator/denominator, positive denominator) this package relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _int_gcd

ExactRational = Fraction

__all__ = [
    "ExactRational",
    "DivisionByZeroPoly",
    "NonzeroRemainder",
    "IdenticallySingular",
    "Poly",
    "RatFunc",
    "variable",
    "poly_divmod",
    "poly_exact_div",
    "poly_gcd",
    "ratfunc_simplify",
    "ratfunc_compose",
    "poly_to_json",
    "poly_from_json",
    "ratfunc_to_json",
    "ratfunc_from_json",
]


class DivisionByZeroPoly(ZeroDivisionError):
    """Division by the zero polynomial."""


class NonzeroRemainder(ArithmeticError):
    """An exact polynomial division left a remainder.

    Raised when a divisibility that the caller's algorithm guarantees (for
    instance every solve step of the tau recursion) fails to hold; callers
    treat it as a hard verification failure, never as a recoverable state.
    """


class IdenticallySingular(ArithmeticError):
    """A composition produced an identically vanishing denominator."""


def _coerce(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient")


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial over Q.

    ``coeffs[k]`` is the coefficient of ``var**k``.  The tuple carries no
    trailing zeros; the zero polynomial is the empty tuple.  Instances are
    immutable and hashable, hence safe to share and to memoize.
    """

    coeffs: tuple[Fraction, ...]
    var: str = "z"

    def __post_init__(self):
        cs = [_coerce(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- inspection ---------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise DivisionByZeroPoly("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            if k == 0:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- construction helpers -----------------------------------------

    @staticmethod
    def constant(c, var: str = "z") -> "Poly":
        return Poly((_coerce(c),), var)

    def _check_var(self, other: "Poly"):
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var!r} vs {other.var!r}")

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other, self.var)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_var(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(tuple(out), self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs), self.var)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other, self.var)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _coerce(other)
            if c == 0:
                return Poly((), self.var)
            return Poly(tuple(c * a for a in self.coeffs), self.var)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_var(other)
        if not self.coeffs or not other.coeffs:
            return Poly((), self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + j] += a * b
        return Poly(tuple(out), self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Poly.constant(1, self.var)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def derivative(self) -> "Poly":
        return Poly(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0), self.var)

    def monic(self) -> "Poly":
        if not self.coeffs:
            raise DivisionByZeroPoly("cannot normalize the zero polynomial")
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        return Poly(tuple(c / lc for c in self.coeffs), self.var)

    def evaluate(self, x):
        """Horner evaluation; works for any value supporting + and *."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return Fraction(0) if isinstance(x, (int, Fraction)) else 0 * x
        return acc

    def shift_up(self, k: int) -> "Poly":
        """Multiply by var**k."""
        if not self.coeffs:
            return self
        return Poly((Fraction(0),) * k + self.coeffs, self.var)


def variable(var: str = "z") -> Poly:
    """The polynomial ``var`` itself."""
    return Poly((Fraction(0), Fraction(1)), var)


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Quotient and remainder in Q[x], deg(remainder) < deg(b)."""
    a._check_var(b)
    if b.is_zero():
        raise DivisionByZeroPoly("polynomial division by zero")
    if a.degree < b.degree:
        return Poly((), a.var), a
    rem = list(a.coeffs)
    db = b.degree
    lb = b.leading
    q = [Fraction(0)] * (a.degree - db + 1)
    for k in range(a.degree - db, -1, -1):
        c = rem[db + k] / lb
        q[k] = c
        if c != 0:
            for i, bc in enumerate(b.coeffs):
                rem[i + k] -= c * bc
    return Poly(tuple(q), a.var), Poly(tuple(rem[:db]), a.var)


def poly_exact_div(a: Poly, b: Poly) -> Poly:
    """Exact quotient a/b; raises NonzeroRemainder if b does not divide a."""
    q, r = poly_divmod(a, b)
    if not r.is_zero():
        raise NonzeroRemainder(f"({a}) is not divisible by ({b}); remainder {r}")
    return q


# -- gcd via primitive pseudo-remainder sequences over Z ---------------
#
# Clearing denominators and stripping integer content at every step keeps
# the intermediate coefficients near the subresultant bound, which is what
# makes repeated simplification of the tau-recursion outputs affordable.

def _int_coeffs(p: Poly) -> list[int]:
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // _int_gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for c in ints:
        g = _int_gcd(g, abs(c))
    if g > 1:
        ints = [c // g for c in ints]
    if ints and ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _int_primitive(ints: list[int]) -> list[int]:
    while ints and ints[-1] == 0:
        ints.pop()
    g = 0
    for c in ints:
        g = _int_gcd(g, abs(c))
    if g > 1:
        ints = [c // g for c in ints]
    if ints and ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer coefficient lists, up to an associate."""
    db = len(b) - 1
    lb = b[-1]
    r = list(a)
    while len(r) - 1 >= db:
        lr = r[-1]
        k = len(r) - 1 - db
        r = [lb * c for c in r[:-1]]
        for j in range(db):
            r[j + k] -= lr * b[j]
        while r and r[-1] == 0:
            r.pop()
        if not r:
            break
    return r


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd of a and b."""
    a._check_var(b)
    if a.is_zero():
        return b.monic() if not b.is_zero() else b
    if b.is_zero():
        return a.monic()
    A, B = _int_coeffs(a), _int_coeffs(b)
    if len(A) < len(B):
        A, B = B, A
    while True:
        R = _int_prem(A, B)
        if not R:
            break
        A, B = B, _int_primitive(R)
    return Poly(tuple(Fraction(c) for c in B), a.var).monic()


@dataclass(frozen=True)
class RatFunc:
    """Rational function num/den over Q, fully cancelled, den monic.

    Construct through :func:`ratfunc_simplify` (or the arithmetic
    operators); the raw constructor trusts its inputs.
    """

    num: Poly
    den: Poly

    @property
    def var(self) -> str:
        return self.num.var

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __str__(self) -> str:
        if self.den.degree == 0 and self.den.coeffs[0] == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    @staticmethod
    def from_poly(p: Poly) -> "RatFunc":
        return RatFunc(p, Poly.constant(1, p.var))

    @staticmethod
    def constant(c, var: str) -> "RatFunc":
        return RatFunc(Poly.constant(c, var), Poly.constant(1, var))

    def _lift(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.constant(other, self.var)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ratfunc_simplify(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ratfunc_simplify(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            raise DivisionByZeroPoly("division by the zero rational function")
        return ratfunc_simplify(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._lift(other)
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc.constant(1, self.var) / self ** (-n)
        out = RatFunc.constant(1, self.var)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def derivative(self) -> "RatFunc":
        return ratfunc_simplify(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def evaluate(self, x):
        """Value at x (Fraction, float or complex); ZeroDivisionError at a pole."""
        d = self.den.evaluate(x)
        if d == 0:
            raise ZeroDivisionError(f"pole of rational function at {x}")
        return self.num.evaluate(x) / d


def ratfunc_simplify(num: Poly, den: Poly) -> RatFunc:
    """Cancel gcd(num, den) and scale the denominator monic."""
    num._check_var(den)
    if den.is_zero():
        raise DivisionByZeroPoly("rational function with zero denominator")
    if num.is_zero():
        return RatFunc(Poly((), num.var), Poly.constant(1, num.var))
    g = poly_gcd(num, den)
    if g.degree > 0:
        num = poly_exact_div(num, g)
        den = poly_exact_div(den, g)
    lc = den.leading
    if lc != 1:
        den = den.monic()
        num = num * (1 / lc)
    return RatFunc(num, den)


def ratfunc_compose(f: RatFunc, g: RatFunc) -> RatFunc:
    """Composition f(g(y)) as a fully simplified rational function of y.

    f lives in some variable x, g in a variable y; the result is in y.
    Raises IdenticallySingular when the denominator of f vanishes
    identically on the image of g.
    """
    gn, gd = g.num, g.den
    dmax = max(f.num.degree, f.den.degree, 0)
    # powers gn^k * gd^(dmax-k), assembled once
    pw_n = [Poly.constant(1, g.var)]
    pw_d = [Poly.constant(1, g.var)]
    for _ in range(dmax):
        pw_n.append(pw_n[-1] * gn)
        pw_d.append(pw_d[-1] * gd)

    def clear(p: Poly) -> Poly:
        # p(g) * gd^dmax as a polynomial in y
        out = Poly((), g.var)
        for k, c in enumerate(p.coeffs):
            if c != 0:
                out = out + c * pw_n[k] * pw_d[dmax - k]
        return out

    an = clear(f.num)
    ad = clear(f.den)
    if ad.is_zero():
        raise IdenticallySingular(
            "denominator of the outer function vanishes identically on the image"
        )
    return ratfunc_simplify(an, ad)


# -- JSON wire format ---------------------------------------------------
#
# Coefficients as exact fraction strings ("3/4"), ascending degree.

def poly_to_json(p: Poly) -> dict:
    return {"variable": p.var, "coefficients": [str(c) for c in p.coeffs]}


def poly_from_json(obj: dict) -> Poly:
    return Poly(tuple(Fraction(s) for s in obj["coefficients"]), obj["variable"])


def ratfunc_to_json(f: RatFunc) -> dict:
    return {
        "variable": f.var,
        "num": [str(c) for c in f.num.coeffs],
        "den": [str(c) for c in f.den.coeffs],
    }


def ratfunc_from_json(obj: dict) -> RatFunc:
    var = obj["variable"]
    num = Poly(tuple(Fraction(s) for s in obj["num"]), var)
    den = Poly(tuple(Fraction(s) for s in obj["den"]), var)
    return ratfunc_simplify(num, den)
