"""Finite-precision arithmetic in Z_p.

A scalar is a residue modulo p^M together with a two-state zero: a residue
of 0 either stands for an exact zero or for a quantity that is merely
indistinguishable from zero at the working precision.  All consumers that
certify anything must branch on this distinction.

Precision is absolute: every operation returns a value known modulo p^M and
never claims more digits than its inputs carried.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import MixedContext, NonUnit, NotIntegral


class _Sentinel:
    def __init__(self, name):
        self._name = name

    def __repr__(self):
        return self._name


#: valuation of a residue that vanishes at precision but is not an exact zero
AT_LEAST_PRECISION = _Sentinel("AT_LEAST_PRECISION")
#: valuation of an exact zero
EXACT_ZERO = _Sentinel("EXACT_ZERO")


def padic_valuation(n: int, p: int) -> int:
    """v_p(n) for a nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicScalar:
    """An element of Z_p known modulo p^M."""

    prime: int
    precision: int
    residue: int
    exact_zero: bool = False

    def __post_init__(self):
        if self.prime < 3 or self.prime % 2 == 0:
            raise ValueError("prime must be odd and at least 3")
        if self.precision < 1:
            raise ValueError("precision must be at least 1")
        object.__setattr__(self, "residue", self.residue % self.modulus)
        if self.exact_zero and self.residue != 0:
            raise ValueError("exact zero must have residue 0")

    @property
    def modulus(self) -> int:
        return self.prime ** self.precision

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_integer(cls, n: int, p: int, M: int) -> "PadicScalar":
        return cls(p, M, n % p**M, exact_zero=(n == 0))

    @classmethod
    def from_rational(cls, num: int, den: int, p: int, M: int) -> "PadicScalar":
        """num/den as an element of Z_p, or NotIntegral if it is not one."""
        if den == 0:
            raise ZeroDivisionError("denominator is zero")
        if num == 0:
            return cls(p, M, 0, exact_zero=True)
        vden = padic_valuation(den, p)
        if vden > 0:
            vnum = padic_valuation(num, p)
            if vden > vnum:
                raise NotIntegral(f"{num}/{den} has negative {p}-adic valuation")
            num //= p**vden
            den //= p**vden
        inv = pow(den % p**M, -1, p**M)
        return cls(p, M, (num * inv) % p**M)

    @classmethod
    def from_fraction(cls, q: Fraction, p: int, M: int) -> "PadicScalar":
        return cls.from_rational(q.numerator, q.denominator, p, M)

    # -- structure ------------------------------------------------------------

    def valuation(self):
        """min(v_p(residue), M); sentinels for the two kinds of zero."""
        if self.exact_zero:
            return EXACT_ZERO
        if self.residue == 0:
            return AT_LEAST_PRECISION
        return padic_valuation(self.residue, self.prime)

    def valuation_at_least(self, k: int) -> bool:
        """True when v_p >= k as far as the precision can tell."""
        if self.residue == 0:
            return True
        return k <= self.precision and self.residue % self.prime**k == 0

    @property
    def is_zero_at_precision(self) -> bool:
        return self.residue == 0

    @property
    def is_unit(self) -> bool:
        return self.residue % self.prime != 0

    def _check(self, other: "PadicScalar"):
        if self.prime != other.prime or self.precision != other.precision:
            raise MixedContext(
                f"(p={self.prime}, M={self.precision}) vs "
                f"(p={other.prime}, M={other.precision})"
            )

    # -- ring operations --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = PadicScalar.from_integer(other, self.prime, self.precision)
        self._check(other)
        return PadicScalar(
            self.prime,
            self.precision,
            (self.residue + other.residue) % self.modulus,
            exact_zero=self.exact_zero and other.exact_zero,
        )

    def __neg__(self):
        return PadicScalar(
            self.prime, self.precision, -self.residue % self.modulus,
            exact_zero=self.exact_zero,
        )

    def __sub__(self, other):
        if isinstance(other, int):
            other = PadicScalar.from_integer(other, self.prime, self.precision)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            other = PadicScalar.from_integer(other, self.prime, self.precision)
        self._check(other)
        return PadicScalar(
            self.prime,
            self.precision,
            (self.residue * other.residue) % self.modulus,
            exact_zero=self.exact_zero or other.exact_zero,
        )

    __radd__ = __add__
    __rmul__ = __mul__

    def inverse(self) -> "PadicScalar":
        """Multiplicative inverse; only units have one."""
        if not self.is_unit:
            raise NonUnit(f"residue {self.residue} has positive valuation")
        return PadicScalar(
            self.prime, self.precision, pow(self.residue, -1, self.modulus)
        )

    def reduce_precision(self, M: int) -> "PadicScalar":
        """Forget digits down to precision M (never extends)."""
        if M > self.precision:
            raise MixedContext("cannot extend precision")
        return PadicScalar(self.prime, M, self.residue % self.prime**M,
                           exact_zero=self.exact_zero)

    def exact_divide_p_power(self, k: int) -> "PadicScalar":
        """Divide by p^k, consuming k digits of precision."""
        if k == 0:
            return self
        if self.precision - k < 1:
            from .errors import PrecisionExhausted
            raise PrecisionExhausted(f"dividing by p^{k} at precision {self.precision}")
        if self.residue % self.prime**k != 0:
            raise NonUnit(f"residue {self.residue} is not divisible by p^{k}")
        return PadicScalar(
            self.prime, self.precision - k,
            (self.residue // self.prime**k) % self.prime**(self.precision - k),
            exact_zero=self.exact_zero,
        )

    def lift(self) -> int:
        """Smallest-magnitude integer representative."""
        if 2 * self.residue > self.modulus:
            return self.residue - self.modulus
        return self.residue

    def __repr__(self):
        tag = " (exact)" if self.exact_zero else ""
        return f"{self.residue} mod {self.prime}^{self.precision}{tag}"


def valuation(x: PadicScalar):
    """Free-function spelling of PadicScalar.valuation."""
    return x.valuation()
