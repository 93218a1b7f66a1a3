# ComplexTrees/family/rational.py

from typing import Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P

from complextrees.config import get_config
from complextrees.errors import InputError

Number = Union[int, float, complex]


def _coeffs(values: Sequence[Number]) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=np.complex128))
    if arr.ndim != 1 or arr.size == 0:
        raise InputError("a polynomial needs a nonempty 1-d coefficient sequence")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"polynomial coefficients must be finite: {arr}")
    return arr


def trim(coeffs: np.ndarray, tol: float = None) -> np.ndarray:
    """Drop leading (highest-degree) coefficients below ``tol`` times the largest one."""
    if tol is None:
        tol = get_config()["polynomial_trim"]
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    scale = np.max(np.abs(coeffs)) if coeffs.size else 0.0
    if scale == 0.0:
        return np.zeros(1, dtype=np.complex128)
    keep = np.nonzero(np.abs(coeffs) > tol * scale)[0]
    return coeffs[: keep[-1] + 1].copy()


def degree(coeffs: np.ndarray) -> int:
    return int(trim(coeffs).size - 1)


def is_zero_poly(coeffs: np.ndarray, tol: float) -> bool:
    return bool(np.all(np.abs(coeffs) <= tol))


def poly_gcd(a: np.ndarray, b: np.ndarray, tol: float = None) -> np.ndarray:
    """Monic greatest common divisor by Euclidean remainders.

    A remainder counts as zero once all of its coefficients fall below
    ``tol`` relative to the largest input coefficient.
    """
    if tol is None:
        tol = get_config()["gcd_tol"]
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
    a = trim(a)
    b = trim(b)
    if is_zero_poly(b, tol * scale):
        g = a
    elif is_zero_poly(a, tol * scale):
        g = b
    else:
        if a.size < b.size:
            a, b = b, a
        while True:
            _, rem = P.polydiv(a, b)
            rem = np.atleast_1d(rem)
            if is_zero_poly(rem, tol * scale):
                g = b
                break
            a, b = b, trim(rem)
    g = trim(g)
    return g / g[-1]


class RationalFunction:
    """Quotient num(z)/den(z) of complex polynomials, coefficients in ascending degree.

    Instances are normalized on construction: common factors are removed,
    the denominator is monic and the zero function is 0/1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Sequence[Number], den: Sequence[Number] = (1.0,), normalize: bool = True):
        num = _coeffs(num)
        den = _coeffs(den)
        if is_zero_poly(trim(den), 0.0):
            raise InputError("denominator is identically zero")
        if normalize:
            num, den = self._normalized(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _normalized(num: np.ndarray, den: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        cfg = get_config()
        den = trim(den, cfg["polynomial_trim"])
        num = trim(num, cfg["polynomial_trim"])
        scale = max(np.max(np.abs(num)), np.max(np.abs(den)))
        if is_zero_poly(num, cfg["gcd_tol"] * scale):
            return np.zeros(1, dtype=np.complex128), np.ones(1, dtype=np.complex128)
        if den.size > 1:
            g = poly_gcd(num, den, cfg["gcd_tol"])
            if g.size > 1:
                num = trim(P.polydiv(num, g)[0])
                den = trim(P.polydiv(den, g)[0])
        lead = den[-1]
        return num / lead, den / lead

    @classmethod
    def constant(cls, value: Number) -> "RationalFunction":
        return cls([value])

    @classmethod
    def variable(cls) -> "RationalFunction":
        return cls([0.0, 1.0])

    @classmethod
    def coerce(cls, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        return cls.constant(value)

    @property
    def num_degree(self) -> int:
        return int(self.num.size - 1)

    @property
    def den_degree(self) -> int:
        return int(self.den.size - 1)

    def is_zero(self, tol: float = None) -> bool:
        if tol is None:
            tol = get_config()["gcd_tol"]
        return is_zero_poly(self.num, tol)

    def __call__(self, z):
        """Evaluate at a scalar or array; poles give inf/nan as numpy does."""
        zz = np.asarray(z, dtype=np.complex128)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = P.polyval(zz, self.num) / P.polyval(zz, self.den)
        return complex(out) if out.ndim == 0 else out

    def denominator_at(self, z):
        return P.polyval(np.asarray(z, dtype=np.complex128), self.den)

    def __add__(self, other):
        other = RationalFunction.coerce(other)
        num = P.polyadd(P.polymul(self.num, other.den), P.polymul(other.num, self.den))
        return RationalFunction(num, P.polymul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, normalize=False)

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        other = RationalFunction.coerce(other)
        return RationalFunction(P.polymul(self.num, other.num), P.polymul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalFunction.coerce(other)
        if other.is_zero(0.0):
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(P.polymul(self.num, other.den), P.polymul(self.den, other.num))

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) / self

    def __str__(self) -> str:
        if self.den_degree == 0 and self.den[0] == 1:
            return format_poly(self.num)
        return f"({format_poly(self.num)}) / ({format_poly(self.den)})"

    def __repr__(self) -> str:
        return f"RationalFunction(num={format_poly(self.num)}, den={format_poly(self.den)})"


def format_poly(coeffs: np.ndarray, var: str = "z") -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        if c.imag == 0:
            coef = f"{c.real:.12g}"
        elif c.real == 0:
            coef = f"{c.imag:.12g}i"
        else:
            coef = f"({c.real:.12g}{c.imag:+.12g}i)"
        terms.append(coef if k == 0 else f"{coef}*{var}" + (f"^{k}" if k > 1 else ""))
    return " + ".join(terms) or "0"
