"""Theta elements: Riemann sums of plus symbols over (Z/p^(n+1))^*.

Every unit a modulo p^(n+1) factors as omega(a) * gamma^j with gamma = 1+p
and omega(a) the Teichmueller representative; the theta element at level n
collects the plus symbols along each gamma-fiber,

    theta_n = sum_j c_j (1+X)^j,   c_j = sum_i [ omega^i gamma^j / p^(n+1) ]^+,

reduced in Lambda/(omega_n, p^M).  Only the trivial tame character enters,
so only plus symbols are used; minus symbols stay in the table for symmetry
checks.

The three-term congruence linking consecutive levels is a consequence of
the Hecke relations; check_compat re-proves it numerically on each run
rather than assuming it (the sign below is the empirically pinned one).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import IncompleteTable, NotAUnit
from .lambda_ring import IwasawaContext, LambdaElement, divrem
from .modsym import SymbolTable
from .padic import PadicScalar


def teichmueller(a: int, p: int, modulus: int) -> int:
    """The (p-1)-th root of unity congruent to a mod p, taken mod `modulus`."""
    if a % p == 0:
        raise NotAUnit(f"{a} is divisible by {p}")
    x = a % modulus
    while True:
        y = pow(x, p, modulus)
        if y == x:
            return x
        x = y


class UnitDecomposer:
    """Splits units of Z/p^(n+1) as omega(g)^i * gamma^j, gamma = 1 + p."""

    def __init__(self, p: int, n: int):
        self.p = p
        self.n = n
        self.modulus = p ** (n + 1)
        gamma = 1 + p
        self._gamma_log = {}
        x = 1
        for j in range(p**n):
            self._gamma_log[x] = j
            x = (x * gamma) % self.modulus
        # Teichmueller values indexed by their exponent over a fixed
        # generator of the (p-1)-torsion
        from .lseries import primitive_root_mod_p2
        g = primitive_root_mod_p2(p)
        w = teichmueller(g, p, self.modulus)
        self.teich_by_index = []
        x = 1
        for i in range(p - 1):
            self.teich_by_index.append(x)
            x = (x * w) % self.modulus
        self._teich_index = {v: i for i, v in enumerate(self.teich_by_index)}

    def decompose(self, a: int):
        """(i, j) with a = omega^i * gamma^j mod p^(n+1)."""
        a = a % self.modulus
        if a % self.p == 0:
            raise NotAUnit(f"{a} is divisible by {self.p}")
        w = teichmueller(a, self.p, self.modulus)
        i = self._teich_index[w]
        j = self._gamma_log[(a * pow(w, -1, self.modulus)) % self.modulus]
        return i, j

    def teichmueller_value(self, a: int) -> int:
        return teichmueller(a, self.p, self.modulus)


def decompose_unit(a: int, p: int, n: int):
    """Standalone spelling of UnitDecomposer.decompose."""
    return UnitDecomposer(p, n).decompose(a)


@dataclass(frozen=True)
class ThetaElement:
    level: int
    body: LambdaElement  # in Lambda/(omega_level, p^M)
    sign: str = "plus"
    provenance: str = ""

    @property
    def context(self) -> IwasawaContext:
        return self.body.context

    def value_at_zero(self) -> PadicScalar:
        return self.body.evaluate_at_zero()


def build_theta(table: SymbolTable, n: int, ctx_or_M) -> ThetaElement:
    """Theta element at level n from a table complete through level n+1."""
    p = table.p
    if isinstance(ctx_or_M, IwasawaContext):
        M = ctx_or_M.precision
    else:
        M = int(ctx_or_M)
    if not table.has_level(n + 1):
        raise IncompleteTable(f"theta at level {n} needs symbols mod {p}^{n+1}")
    ctx = IwasawaContext(p, M, ("level", n))
    dec = UnitDecomposer(p, n)
    d = p**n
    sums = [None] * d
    for i in range(p - 1):
        w = dec.teich_by_index[i]
        gamma = 1 + p
        a = w
        for j in range(d):
            sym = table.plus(n + 1, a)
            sums[j] = sym if sums[j] is None else sums[j] + sym
            a = (a * gamma) % dec.modulus
    # expand sum_j c_j (1+X)^j in the monomial basis, exactly over Q
    monomial = [Fraction(0)] * d
    row = [Fraction(1)]  # (1+X)^j, starting at j = 0
    for j, c in enumerate(sums):
        if c:
            for k, b in enumerate(row):
                monomial[k] += c * b
        if j < d - 1:
            nxt = row + [Fraction(0)]
            for k in range(len(row), 0, -1):
                nxt[k] = row[k - 1] + (row[k] if k < len(row) else 0)
            row = nxt
    zero = PadicScalar(p, M, 0, exact_zero=True)
    coeffs = [
        zero if q == 0
        else PadicScalar.from_rational(q.numerator, q.denominator, p, M)
        for q in monomial
    ]
    body = LambdaElement(ctx, coeffs)
    return ThetaElement(n, body, "plus", provenance=f"{table.curve_label}/p{p}")


@dataclass
class CompatReport:
    level: int
    passed: bool
    quotient: LambdaElement = None
    detail: str = ""
    index: int = None  # first offending coefficient when failed


def check_compat(thetas, n: int, a_p: int) -> CompatReport:
    """Verify theta_n = a_p theta_(n-1) - Phi_(n-1) theta_(n-2) mod omega_(n-1).

    The difference must be exactly divisible by omega_(n-1) at the working
    p-precision; the quotient is returned as a witness.  Levels 0 and 1 are
    covered by the Hecke validation of the underlying table instead.
    """
    if n < 2:
        raise ValueError("the three-term congruence starts at level 2")
    th_n, th_n1, th_n2 = thetas[n], thetas[n - 1], thetas[n - 2]
    ctx = th_n.context
    M = ctx.precision
    p = ctx.prime
    wide = IwasawaContext(p, M, ("degree", p**n + 1))
    lift = lambda t: wide.element([c for c in t.body.coeffs])
    phi = wide.phi(n - 1)
    lhs = lift(th_n) - lift(th_n1).scale(a_p) + phi * lift(th_n2)
    omega = wide.omega(n - 1)
    Q, R = divrem(lhs, omega)
    for idx, c in enumerate(R.coeffs):
        if not c.is_zero_at_precision:
            return CompatReport(
                n, False,
                detail=f"coefficient {idx} of the remainder is {c!r}",
                index=idx,
            )
    return CompatReport(n, True, quotient=Q)
