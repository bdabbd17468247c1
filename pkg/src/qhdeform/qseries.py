"""Scalar series machinery for the (q,h) map.

q-integers, Legendre polynomials at xi = (q^2 + q^-2)/2, the map
coefficients alpha_n, the inverse coefficients beta_n (partition recursion
and an independent order-by-order reversion), the generating function
(1 - 2 xi x^2 + x^4)^(-1/2) and the scalar u <-> v inversion.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import BranchAmbiguity, NonGenericQ
from .scalarring import Frac, Laurent, NumericContext, QDen

__all__ = [
    "q_integer",
    "q_integer_half",
    "q_factorial",
    "xi",
    "legendre",
    "legendre_at",
    "legendre_xi",
    "alpha",
    "alpha_classical",
    "alpha_numeric",
    "Partition",
    "enumerate_partitions",
    "beta_sequence",
    "beta_recursive",
    "beta_oracle",
    "beta_symbolic",
    "beta_classical",
    "tanh_coefficients",
    "bernoulli_tanh_coefficient",
    "binomial_half",
    "binomial_series",
    "f_series",
    "f_series_product",
    "u_of_v",
    "v_of_u",
]


@lru_cache(maxsize=None)
def q_integer(n: int) -> Laurent:
    """[n] = (q^n - q^-n)/(q - q^-1) expanded as sum_k q^(n-1-2k)."""
    if n == 0:
        return Laurent()
    if n < 0:
        return -q_integer(-n)
    return Laurent({2 * (n - 1 - 2 * k): 1 for k in range(n)})


def q_integer_half(two_x: int) -> Frac:
    """[x] for x = two_x/2, possibly half-integral.

    Returned as (s^two_x - s^-two_x)/(q - 1/q); for even two_x the
    denominator cancels and the numerator is the Laurent polynomial [two_x/2].
    """
    return Frac(Laurent.monomial(two_x) - Laurent.monomial(-two_x), QDen({0: 1}))


@lru_cache(maxsize=None)
def q_factorial(n: int) -> Laurent:
    if n < 0:
        raise ValueError("q_factorial needs n >= 0")
    out = Laurent.const(1)
    for k in range(1, n + 1):
        out = out * q_integer(k)
    return out


@lru_cache(maxsize=None)
def xi() -> Laurent:
    return Laurent({4: Fraction(1, 2), -4: Fraction(1, 2)})


@lru_cache(maxsize=None)
def legendre(n: int) -> tuple:
    """Coefficients (ascending powers of xi) of the Legendre polynomial P_n."""
    if n < 0:
        raise ValueError("legendre needs n >= 0")
    p_prev, p = (Fraction(1),), (Fraction(0), Fraction(1))
    if n == 0:
        return p_prev
    for k in range(1, n):
        # (k+1) P_{k+1} = (2k+1) xi P_k - k P_{k-1}
        nxt = [Fraction(0)] * (k + 2)
        for i, c in enumerate(p):
            nxt[i + 1] += (2 * k + 1) * c
        for i, c in enumerate(p_prev):
            nxt[i] -= k * c
        p_prev, p = p, tuple(c / (k + 1) for c in nxt)
    return p


def legendre_at(n: int, x):
    """Horner evaluation of P_n at ``x`` (any ring element)."""
    coeffs = legendre(n)
    out = 0 * x + coeffs[-1]
    for c in reversed(coeffs[:-1]):
        out = out * x + c
    return out


@lru_cache(maxsize=None)
def legendre_xi(n: int) -> Laurent:
    """P_n(xi(q)) as a Laurent polynomial in s."""
    return legendre_at(n, xi())


@lru_cache(maxsize=None)
def alpha(n: int) -> Frac:
    """alpha_n = P_n(xi)/[2n+1], kept as a quotient when not divisible."""
    if n < 0:
        raise ValueError("alpha needs n >= 0")
    return Frac(legendre_xi(n), QDen({2 * n + 1: 1}))


def alpha_classical(n: int) -> Fraction:
    return Fraction(1, 2 * n + 1)


def alpha_numeric(n: int, ctx: NumericContext) -> complex:
    den = ctx.q_integer(2 * n + 1)
    if abs(den) <= ctx.singular_tol:
        raise NonGenericQ(f"[{2 * n + 1}] vanishes at q = {ctx.q}", index=2 * n + 1)
    return legendre_at(n, complex(xi().subs_s(ctx.s))) / den


# --- inversion by partitions ----------------------------------------------------

@dataclass(frozen=True)
class Partition:
    """Multiplicities nu_p of the parts p, for a fixed m and n."""

    n: int
    m: int
    nu: tuple  # ((p, nu_p), ...) with nu_p > 0, p ascending

    @property
    def total(self) -> int:
        return sum(k for _, k in self.nu)

    @property
    def zeta(self) -> int:
        """(2m+1)! / ((2m+1 - sum nu)! prod nu_p!)."""
        top = 2 * self.m + 1
        out = math.factorial(top) // math.factorial(top - self.total)
        for _, k in self.nu:
            out //= math.factorial(k)
        return out


def enumerate_partitions(n: int, m: int) -> list:
    """All multiplicity vectors with sum p*nu_p = n - m and sum nu_p <= 2m + 1."""
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    target, cap = n - m, 2 * m + 1
    out = []

    def rec(p, remaining, used, acc):
        if remaining == 0:
            out.append(Partition(n, m, tuple(acc)))
            return
        if p > remaining:
            return
        for k in range(min(remaining // p, cap - used), -1, -1):
            rec(p + 1, remaining - k * p, used + k, acc + [(p, k)] if k else acc)

    rec(1, target, 0, [])
    out.sort(key=lambda part: part.nu)
    return out


def beta_sequence(alphas: Sequence, N: int) -> list:
    """beta_0..beta_N from alpha_0..alpha_N by the partition recursion.

    ``alphas`` may hold any ring elements; alphas[0] plays the role of 1.
    """
    if len(alphas) <= N:
        raise ValueError("need alpha_0..alpha_N")
    one = alphas[0]
    zero = one - one
    betas = [one]
    for n in range(1, N + 1):
        acc = zero
        for m in range(1, n + 1):
            z = zero
            for part in enumerate_partitions(n, m):
                term = one * part.zeta
                for p, k in part.nu:
                    term = term * betas[p] ** k
                z = z + term
            acc = acc + alphas[m] * z
        betas.append(-acc)
    return betas


@lru_cache(maxsize=None)
def _exact_betas(N: int) -> tuple:
    return tuple(beta_sequence([alpha(k) for k in range(N + 1)], N))


def beta_recursive(n: int, alphas: Sequence | None = None):
    """beta_n by the partition recursion; exact q-dependent values by default."""
    if alphas is None:
        return _exact_betas(n)[n]
    return beta_sequence(alphas, n)[n]


def _series_mul(a, b, order, zero):
    out = [zero] * (order + 1)
    for i, x in enumerate(a):
        if i > order or _is_zero(x):
            continue
        for j in range(min(len(b), order + 1 - i)):
            if not _is_zero(b[j]):
                out[i + j] = out[i + j] + x * b[j]
    return out


def _is_zero(x):
    if isinstance(x, (Frac, Laurent)):
        return x.is_zero()
    return x == 0


def beta_oracle(N: int, alphas: Sequence | None = None) -> list:
    """Compositional inverse of w = sum alpha_n v^(2n+1) by order matching.

    Builds v = sum beta_n w^(2n+1) one order at a time: with the current
    truncation substituted into the forward series, the coefficient of
    w^(2n+1) must vanish, and beta_n enters it linearly with weight alpha_0.
    """
    if alphas is None:
        alphas = [alpha(k) for k in range(N + 1)]
    one = alphas[0]
    zero = one - one
    order = 2 * N + 1
    betas = [one]
    for n in range(1, N + 1):
        g = [zero] * (order + 1)
        for k, b in enumerate(betas):
            g[2 * k + 1] = b
        # f(g) up to w^(2n+1); powers of g built incrementally
        g2 = _series_mul(g, g, 2 * n + 1, zero)
        power = g
        total = zero
        for m in range(n + 1):
            if m:
                power = _series_mul(power, g2, 2 * n + 1, zero)
            total = total + alphas[m] * power[2 * n + 1]
        # target coefficient of w^(2n+1) is 0 for n >= 1; alpha_0 = 1
        betas.append(-total)
    return betas


def beta_symbolic(n: int):
    """beta_n as a sympy polynomial in the abstract symbols alpha1..alphan."""
    import sympy

    syms = [sympy.Integer(1)] + list(sympy.symbols(f"alpha1:{n + 1}")) if n else [sympy.Integer(1)]
    return sympy.expand(beta_sequence(syms, n)[n])


def beta_symbolic_oracle(n: int):
    import sympy

    syms = [sympy.Integer(1)] + list(sympy.symbols(f"alpha1:{n + 1}")) if n else [sympy.Integer(1)]
    return sympy.expand(beta_oracle(n, syms)[n])


def beta_classical(N: int) -> list:
    """beta_n at q = 1 (alpha_n = 1/(2n+1))."""
    return beta_sequence([alpha_classical(k) for k in range(N + 1)], N)


def tanh_coefficients(N: int) -> list:
    """Coefficients of w^(2n+1) in tanh w, n = 0..N, by reversing arctanh."""
    return beta_oracle(N, [alpha_classical(k) for k in range(N + 1)])


def bernoulli_tanh_coefficient(n: int) -> Fraction:
    """2^(2n) (2^(2n) - 1) B_(2n) / (2n)!, the printed q -> 1 limit formula."""
    import sympy

    b = sympy.bernoulli(2 * n)
    b = Fraction(int(b.p), int(b.q))
    return 2 ** (2 * n) * (2 ** (2 * n) - 1) * b / math.factorial(2 * n)


# --- generating function -----------------------------------------------------

def binomial_half(k: int, a: Fraction = Fraction(1, 2)) -> Fraction:
    """Generalized binomial coefficient C(a, k)."""
    out = Fraction(1)
    for i in range(k):
        out = out * (a - i) / (i + 1)
    return out


def binomial_series(a: Fraction, N: int) -> list:
    """Coefficients of (1 + y)^a up to y^N."""
    return [binomial_half(k, Fraction(a)) for k in range(N + 1)]


def _poly_mul(a, b, N):
    out = [Laurent()] * (N + 1)
    for i, x in enumerate(a[: N + 1]):
        if not x:
            continue
        for j, y in enumerate(b[: N + 1 - i]):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def f_series(N: int) -> list:
    """Coefficients of x^(2n), n <= N, of (1 - 2 xi x^2 + x^4)^(-1/2)."""
    # (1 + z)^(-1/2) with z = -2 xi y + y^2, y = x^2
    z = [Laurent(), -2 * xi(), Laurent.const(1)]
    out = [Laurent()] * (N + 1)
    power = [Laurent.const(1)]
    for k, c in enumerate(binomial_series(Fraction(-1, 2), N)):
        if k:
            power = _poly_mul(power, z, N)
        for i, p in enumerate(power[: N + 1]):
            if p:
                out[i] = out[i] + p * c
    return out


def f_series_product(N: int) -> list:
    """Same coefficients from (1 - (q x)^2)^(-1/2) (1 - (x/q)^2)^(-1/2)."""
    cs = binomial_series(Fraction(-1, 2), N)
    left = [Laurent({4 * k: c * (-1) ** k}) for k, c in enumerate(cs)]
    right = [Laurent({-4 * k: c * (-1) ** k}) for k, c in enumerate(cs)]
    return _poly_mul(left, right, N)


# --- closed-form u <-> v ------------------------------------------------------

def _xi_numeric(ctx):
    return (ctx.q ** 2 + ctx.q ** -2) / 2


def u_of_v(v: complex, ctx: NumericContext) -> complex:
    """u = v / sqrt((1 - (q v)^2)(1 - (v/q)^2)), each root on its principal branch."""
    q = ctx.q
    return v / (cmath.sqrt(1 - (q * v) ** 2) * cmath.sqrt(1 - (v / q) ** 2))


def v_of_u(u: complex, ctx: NumericContext, *, rtol: float = 0.5) -> complex:
    """Invert u_of_v near the origin.

    Both roots of v^4 - (2 xi + 1/u^2) v^2 + 1 = 0 and both signs of v are
    tried; the candidate closest to the expansion v = u - xi u^3 is kept.
    """
    u = complex(u)
    if u == 0:
        raise ValueError("u must be nonzero")
    x = _xi_numeric(ctx)
    a = x + 1 / (2 * u * u)
    root = cmath.sqrt(a * a - 1)
    approx = u - x * u ** 3
    big = a + root if abs(a + root) >= abs(a - root) else a - root
    candidates = []
    # the roots multiply to 1; taking the small one as 1/big avoids cancellation
    for v2 in (1 / big, big):
        w = cmath.sqrt(v2)
        candidates.extend((w, -w))
    best = min(candidates, key=lambda v: abs(v - approx))
    if abs(best - approx) > rtol * abs(u):
        raise BranchAmbiguity(f"no branch of v(u) matches v ~ u at u = {u}")
    return best
