"""
Cyclotomic Numbers - Exact arithmetic in Q(zeta_n)
Elements are polynomials in zeta reduced modulo the n-th cyclotomic polynomial
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath
from sympy import QQ, Poly, Rational, Symbol, cyclotomic_poly

logger = logging.getLogger(__name__)

Z = Symbol("z")

MAX_ORDER = 24

# decimal digits for sign evaluation of real elements
_PRECISION = (50, 120, 400)


@lru_cache(maxsize=None)
def _modulus(n: int) -> Poly:
    return Poly(cyclotomic_poly(n, Z), Z, domain=QQ)


class CyclotomicNumber:
    """Element of Q(zeta_n), zeta = exp(2 pi i / n)"""

    __slots__ = ("n", "poly")
    __hash__ = None

    def __init__(self, n: int, poly: Poly):
        self.n = n
        self.poly = poly.rem(_modulus(n))

    @classmethod
    def rational(cls, n: int, value: Union[int, Fraction]) -> "CyclotomicNumber":
        value = Fraction(value)
        return cls(n, Poly(Rational(value.numerator, value.denominator), Z, domain=QQ))

    @classmethod
    def root(cls, n: int, k: int = 1) -> "CyclotomicNumber":
        """zeta_n ** k"""
        return cls(n, Poly(Z ** (k % n), Z, domain=QQ))

    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.n != self.n:
                raise ValueError(f"cannot mix Q(zeta_{self.n}) and Q(zeta_{other.n})")
            return other
        return CyclotomicNumber.rational(self.n, other)

    def __add__(self, other):
        return CyclotomicNumber(self.n, self.poly + self._coerce(other).poly)

    __radd__ = __add__

    def __sub__(self, other):
        return CyclotomicNumber(self.n, self.poly - self._coerce(other).poly)

    def __rsub__(self, other):
        return CyclotomicNumber(self.n, self._coerce(other).poly - self.poly)

    def __mul__(self, other):
        return CyclotomicNumber(self.n, self.poly * self._coerce(other).poly)

    __rmul__ = __mul__

    def __neg__(self):
        return CyclotomicNumber(self.n, -self.poly)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.poly.is_zero:
            raise ZeroDivisionError("division by zero in a cyclotomic field")
        return CyclotomicNumber(self.n, self.poly * other.poly.invert(_modulus(self.n)))

    def __eq__(self, other) -> bool:
        return (self - other).poly.is_zero

    def __ne__(self, other) -> bool:
        return not self == other

    def conjugate(self) -> "CyclotomicNumber":
        """Complex conjugate: zeta -> zeta^(n-1)"""
        inverse = Poly(Z ** (self.n - 1), Z, domain=QQ)
        return CyclotomicNumber(self.n, self.poly.compose(inverse))

    def to_complex(self, digits: int = 50) -> mpmath.mpc:
        with mpmath.workdps(digits):
            zeta = mpmath.expjpi(mpmath.mpf(2) / self.n)
            total = mpmath.mpc(0)
            for (k,), coeff in self.poly.terms():
                total += mpmath.mpf(int(coeff.p)) / int(coeff.q) * zeta ** k
            return total

    def real_sign(self) -> int:
        """Sign of a real element; exact zero test first, then rising precision"""
        if self.poly.is_zero:
            return 0
        for digits in _PRECISION:
            value = self.to_complex(digits).real
            if abs(value) > mpmath.mpf(10) ** (10 - digits):
                return 1 if value > 0 else -1
        raise ArithmeticError(f"could not decide the sign of {self.poly.as_expr()}")

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self.n}, {self.poly.as_expr()})"


def real_sign(x) -> int:
    if isinstance(x, CyclotomicNumber):
        return x.real_sign()
    return (x > 0) - (x < 0)
