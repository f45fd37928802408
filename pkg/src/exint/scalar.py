"""Exact Gaussian-rational scalars, extended binomials and exact interpolation.

Everything downstream computes over :class:`Scalar`, a complex number whose
real and imaginary parts are big-integer fractions (``gmpy2.mpq``).  Equality
is bit-exact, so identity checks never need a tolerance.
"""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

from .errors import DuplicateAbscissa, PoleError, ScalarParseError

_ZERO = mpq(0)
_ONE = mpq(1)
_MPQ = type(_ZERO)


def _q(value):
    if type(value) is _MPQ:
        return value
    if isinstance(value, (int, Fraction, Rational)):
        return mpq(value)
    if isinstance(value, str):
        return mpq(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


class Scalar:
    """Exact complex rational ``re + im*i``.

    Treat instances as immutable.  Arithmetic with ``int``/``Fraction`` operands is
    supported and stays exact; division by zero raises ``ZeroDivisionError``.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, Scalar):
            if im:
                raise TypeError("cannot combine a Scalar real part with an imaginary part")
            self.re = re.re
            self.im = re.im
            return
        self.re = _q(re)
        self.im = _q(im)

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        return parse_scalar(text)

    # --- predicates -------------------------------------------------------
    @property
    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    # --- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if type(other) is not Scalar:
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        return _mk(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is not Scalar:
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        return _mk(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return other - self

    def __neg__(self):
        return _mk(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if type(other) is not Scalar:
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b:
            if not d:
                return _mk(a * c, _ZERO)
            return _mk(a * c, a * d)
        if not d:
            return _mk(a * c, b * c)
        return _mk(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def reciprocal(self) -> "Scalar":
        a, b = self.re, self.im
        if not b:
            if not a:
                raise ZeroDivisionError("Scalar division by zero")
            return _mk(_ONE / a, _ZERO)
        n = a * a + b * b
        return _mk(a / n, -b / n)

    def __truediv__(self, other):
        if type(other) is not Scalar:
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        if not other.im:
            if not other.re:
                raise ZeroDivisionError("Scalar division by zero")
            return _mk(self.re / other.re, self.im / other.re)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return other * self.reciprocal()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.reciprocal() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "Scalar":
        return _mk(self.re, -self.im)

    def abs2(self):
        """Exact squared modulus, as an ``mpq``."""
        return self.re * self.re + self.im * self.im

    # --- comparison / hashing --------------------------------------------
    def __eq__(self, other):
        if type(other) is Scalar:
            return self.re == other.re and self.im == other.im
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def to_fraction(self) -> Fraction:
        if self.im:
            raise ValueError("Scalar has a nonzero imaginary part")
        return Fraction(int(self.re.numerator), int(self.re.denominator))

    # --- text -------------------------------------------------------------
    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar('{format_scalar(self)}')"


def _mk(re, im) -> Scalar:
    s = _new(Scalar)
    s.re = re
    s.im = im
    return s


_new = object.__new__


def _coerce(value) -> Scalar:
    if type(value) is Scalar:
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a Scalar")
    if isinstance(value, (int, Fraction, _MPQ)) or isinstance(value, Rational):
        return _mk(mpq(value), _ZERO)
    raise TypeError(f"unsupported operand {type(value).__name__}")


def as_scalar(value) -> Scalar:
    """Convert ints, fractions, mpq and ``"p/q+r/s*i"`` strings to a Scalar."""
    if type(value) is Scalar:
        return value
    if isinstance(value, str):
        return parse_scalar(value)
    return _coerce(value)


ZERO = _mk(_ZERO, _ZERO)
ONE = _mk(_ONE, _ZERO)
I = _mk(_ZERO, _ONE)


def _fmt_q(q) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_scalar(s: Scalar) -> str:
    """``p/q`` for real values, ``p/q+r/s*i`` otherwise (denominators > 0)."""
    if not s.im:
        return _fmt_q(s.re)
    sign = "-" if s.im < 0 else "+"
    return f"{_fmt_q(s.re)}{sign}{_fmt_q(abs(s.im))}*i"


_RAT = r"[+-]?\d+(?:/\d+)?"
_REAL_RE = re.compile(rf"^({_RAT})$")
_IMAG_RE = re.compile(r"^([+-]?(?:\d+(?:/\d+)?)?)\*?i$")
_FULL_RE = re.compile(rf"^({_RAT})([+-](?:\d+(?:/\d+)?)?)\*?i$")


def _parse_rat(text: str):
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ScalarParseError(f"zero denominator in {text!r}")
    return mpq(int(num), int(den) if den else 1)


def _parse_imag_coeff(text: str):
    if text in ("", "+"):
        return _ONE
    if text == "-":
        return -_ONE
    return _parse_rat(text)


def parse_scalar(text: str) -> Scalar:
    """Parse ``"3/7"``, ``"-2"``, ``"1/2*i"``, ``"3/7-1/5*i"`` and similar."""
    if not isinstance(text, str):
        raise ScalarParseError(f"expected a string, got {type(text).__name__}")
    t = text.replace(" ", "")
    if not t:
        raise ScalarParseError("empty scalar literal")
    m = _REAL_RE.match(t)
    if m:
        return _mk(_parse_rat(m.group(1)), _ZERO)
    m = _FULL_RE.match(t)
    if m:
        return _mk(_parse_rat(m.group(1)), _parse_imag_coeff(m.group(2)))
    m = _IMAG_RE.match(t)
    if m:
        return _mk(_ZERO, _parse_imag_coeff(m.group(1)))
    raise ScalarParseError(f"malformed scalar literal {text!r}")


# --- special functions -----------------------------------------------------

def gbinom(x, k: int) -> Scalar:
    """Binomial symbol with arbitrary complex-rational top: x(x-1)...(x-k+1)/k!."""
    if k < 0:
        raise ValueError("gbinom needs k >= 0")
    x = as_scalar(x)
    num = ONE
    den = 1
    for j in range(k):
        num = num * (x - j)
        den *= j + 1
    return num / den


def f_pole(m: int, x) -> Scalar:
    """Simple pole 1/(x - m/2); raises :class:`PoleError` at x = m/2."""
    x = as_scalar(x)
    d = x - Fraction(m, 2)
    if d.is_zero():
        raise PoleError(m, x)
    return d.reciprocal()


def is_half_integer_pole(x) -> bool:
    """True iff x is real, nonnegative and 2x is an integer."""
    x = as_scalar(x)
    if x.im:
        return False
    two_x = 2 * x.re
    return x.re >= 0 and two_x.denominator == 1


def check_not_pole(x) -> None:
    x = as_scalar(x)
    if is_half_integer_pole(x):
        raise PoleError(int(2 * x.re), x)


# --- polynomials -----------------------------------------------------------

ZERO_POLY_DEGREE = -1


class ScalarPoly:
    """Dense univariate polynomial; ``coeffs[d]`` multiplies ``t**d``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [as_scalar(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_POLY_DEGREE

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t):
        t = as_scalar(t)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __getitem__(self, d: int) -> Scalar:
        return self.coeffs[d] if 0 <= d < len(self.coeffs) else ZERO

    def __add__(self, other: "ScalarPoly") -> "ScalarPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return ScalarPoly(self[d] + other[d] for d in range(n))

    def __sub__(self, other: "ScalarPoly") -> "ScalarPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return ScalarPoly(self[d] - other[d] for d in range(n))

    def __mul__(self, other):
        if not isinstance(other, ScalarPoly):
            c = as_scalar(other)
            return ScalarPoly(a * c for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return ScalarPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return ScalarPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ScalarPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self):
        return f"ScalarPoly([{', '.join(map(str, self.coeffs))}])"


def _lagrange_basis(xs):
    """Coefficient lists of the Lagrange basis polynomials for abscissae xs."""
    basis = []
    for i, xi in enumerate(xs):
        poly = ScalarPoly([ONE])
        denom = ONE
        for j, xj in enumerate(xs):
            if j == i:
                continue
            poly = poly * ScalarPoly([-xj, ONE])
            denom = denom * (xi - xj)
        inv = denom.reciprocal()
        basis.append([c * inv for c in poly.coeffs] + [ZERO] * (len(xs) - len(poly.coeffs)))
    return basis


def interpolate(points, zero=None):
    """Exact Lagrange interpolation through ``points = [(x, value), ...]``.

    Scalar values give a :class:`ScalarPoly`.  Any other value type must
    support ``+`` and multiplication by a Scalar, and a ``zero`` element has
    to be supplied; the result is then the list of coefficient values
    (index = degree), with trailing zeros trimmed via ``value.is_zero()``.
    """
    points = list(points)
    if not points:
        raise ValueError("interpolate needs at least one point")
    xs = [as_scalar(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa("abscissae must be pairwise distinct")
    basis = _lagrange_basis(xs)
    values = [v for _, v in points]
    scalar_valued = zero is None
    if scalar_valued:
        values = [as_scalar(v) for v in values]
        zero = ZERO
    coeffs = []
    for d in range(len(xs)):
        acc = zero
        for b, v in zip(basis, values):
            if not b[d].is_zero():
                acc = acc + v * b[d]
        coeffs.append(acc)
    if scalar_valued:
        return ScalarPoly(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs
