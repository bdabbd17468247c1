"""Finite-dimensional representations of U_q(sl(2)).

Basis vectors are ordered by decreasing magnetic number, index i <-> m = j - i,
so the raising generator is strictly upper triangular.

Two bases are available.  The *polynomial* basis has J+ e_m = e_{m+1} and
J- e_m = [j+m][j-m+1] e_{m-1}; all entries are Laurent polynomials and every
identity can be checked exactly.  The *symmetric* basis carries the usual
square roots and is numeric only.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import qseries
from .errors import NonGenericQ, NotNilpotent
from .reports import VerificationReport
from .scalarring import Frac, HPoly, Laurent, NumericContext, QDen, eval_numeric, substitute_q_one

__all__ = [
    "RingMatrix",
    "ExactRing",
    "ClassicalRing",
    "NumericRing",
    "RepSpec",
    "GeneratorSet",
    "build_uq_rep",
    "build_sl2_rep",
    "basis_similarity",
    "power_action_check",
    "nilpotent_series_eval",
    "commutator",
    "nilpotency_index",
    "verify_uq_relations",
    "verify_power_identity",
    "verify_conjugation",
]


class RingMatrix:
    """Dense square matrix over HPoly (exact) or complex numbers (numeric)."""

    __slots__ = ("a",)
    __array_ufunc__ = None

    def __init__(self, a):
        self.a = a

    # --- constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, dim: int, exact: bool) -> RingMatrix:
        if exact:
            a = np.empty((dim, dim), dtype=object)
            z = HPoly()
            for idx in np.ndindex(dim, dim):
                a[idx] = z
            return cls(a)
        return cls(np.zeros((dim, dim), dtype=complex))

    @classmethod
    def identity(cls, dim: int, exact: bool) -> RingMatrix:
        return cls.diag([1] * dim, exact)

    @classmethod
    def diag(cls, entries, exact: bool) -> RingMatrix:
        m = cls.zeros(len(entries), exact)
        for i, x in enumerate(entries):
            m.a[i, i] = HPoly.coerce(x) if exact else complex(x)
        return m

    @classmethod
    def from_rows(cls, rows, exact: bool) -> RingMatrix:
        dim = len(rows)
        m = cls.zeros(dim, exact)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                m.a[i, j] = HPoly.coerce(x) if exact else complex(x)
        return m

    # --- inspection ---------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.a.dtype == object

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def __getitem__(self, idx):
        return self.a[idx]

    def is_zero(self) -> bool:
        if self.exact:
            return not any(x for x in self.a.flat)
        return not self.a.any()

    def nonzero_count(self) -> int:
        if self.exact:
            return sum(1 for x in self.a.flat if x)
        return int(np.count_nonzero(self.a))

    def max_abs(self) -> float:
        if self.exact:
            raise TypeError("max_abs needs a numeric matrix")
        return float(np.abs(self.a).max()) if self.a.size else 0.0

    def is_strictly_upper(self) -> bool:
        n = self.dim
        return all(not self.a[i, j] for i in range(n) for j in range(i + 1))

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        if self.exact and other.exact:
            return self.a.shape == other.a.shape and (self - other).is_zero()
        return bool(np.array_equal(np.asarray(self.a, dtype=complex), np.asarray(other.a, dtype=complex)))

    __hash__ = None

    # --- arithmetic ---------------------------------------------------------
    def _wrap(self, other):
        if isinstance(other, RingMatrix):
            if other.exact != self.exact:
                raise TypeError("cannot mix exact and numeric matrices")
            return other
        return None

    def __add__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return RingMatrix(self.a + other.a)

    def __sub__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return RingMatrix(self.a - other.a)

    def __neg__(self):
        return RingMatrix(-self.a)

    def _scale(self, x):
        if isinstance(x, (Frac, RingMatrix)):
            return NotImplemented
        if self.exact:
            out = np.empty(self.a.shape, dtype=object)
            if isinstance(x, complex):
                raise TypeError("complex scalar on an exact matrix")
            for idx, v in np.ndenumerate(self.a):
                out[idx] = v * x
            return RingMatrix(out)
        if isinstance(x, (HPoly, Laurent)):
            raise TypeError("exact scalar on a numeric matrix")
        return RingMatrix(self.a * complex(x))

    def __mul__(self, x):
        return self._scale(x)

    def __rmul__(self, x):
        return self._scale(x)

    def __matmul__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        if not self.exact:
            return RingMatrix(self.a @ other.a)
        n = self.dim
        rows_b = [[(j, x) for j, x in enumerate(other.a[k]) if x] for k in range(n)]
        out = RingMatrix.zeros(n, True)
        for i in range(n):
            acc = {}
            for k, x in enumerate(self.a[i]):
                if not x:
                    continue
                for j, y in rows_b[k]:
                    p = x * y
                    acc[j] = acc[j] + p if j in acc else p
            for j, v in acc.items():
                out.a[i, j] = v
        return out

    def __pow__(self, k: int) -> RingMatrix:
        if k < 0:
            raise ValueError("negative matrix power")
        out = RingMatrix.identity(self.dim, self.exact)
        for _ in range(k):
            out = out @ self
        return out

    def map(self, fn, exact: bool | None = None) -> RingMatrix:
        """Apply ``fn`` entrywise; ``exact`` selects the output storage."""
        exact = self.exact if exact is None else exact
        out = RingMatrix.zeros(self.dim, exact)
        for idx, v in np.ndenumerate(self.a):
            out.a[idx] = fn(v)
        return out

    def kron(self, other: RingMatrix) -> RingMatrix:
        """Kronecker product, left factor varying slowest."""
        other = self._wrap(other)
        if not self.exact:
            return RingMatrix(np.kron(self.a, other.a))
        n, m = self.dim, other.dim
        out = RingMatrix.zeros(n * m, True)
        for (i, j), x in np.ndenumerate(self.a):
            if not x:
                continue
            for (k, l), y in np.ndenumerate(other.a):
                if y:
                    out.a[i * m + k, j * m + l] = x * y
        return out

    # --- substitutions ------------------------------------------------------
    def evaluate(self, ctx: NumericContext) -> RingMatrix:
        if not self.exact:
            return self
        return self.map(lambda v: eval_numeric(v, ctx), exact=False)

    def at_q_one(self) -> RingMatrix:
        return self.map(lambda v: v.at_q_one())

    def h_zero(self) -> RingMatrix:
        return self.map(lambda v: v.h_zero())

    def divisible_by(self, d: Laurent) -> bool:
        return all(v.divisible_by(d) for v in self.a.flat if v)

    def exact_div(self, d: Laurent) -> RingMatrix:
        return self.map(lambda v: v.exact_div(d))

    def to_complex(self) -> np.ndarray:
        if self.exact:
            raise TypeError("exact matrix; evaluate it first")
        return self.a.copy()

    def __repr__(self):
        kind = "exact" if self.exact else "numeric"
        return f"RingMatrix({kind}, dim={self.dim})"


def commutator(a, b):
    return a @ b - b @ a


def nilpotency_index(a: RingMatrix, tol: float = 1e-12) -> int:
    """Smallest p with a^p = 0 (numeric: below tol relative to |a|^p)."""
    p, power = 1, a
    while p <= a.dim:
        if power.is_zero() if a.exact else power.max_abs() <= tol * max(1.0, a.max_abs()) ** p:
            return p
        power = power @ a
        p += 1
    raise NotNilpotent(f"matrix is not nilpotent (dim {a.dim})")


def _to_frac(x):
    return x if isinstance(x, Frac) else Frac(x, reduce=False)


def nilpotent_series_eval(coeffs, a: RingMatrix, *, check: bool = True):
    """sum_k coeffs[k] a^k, truncated at k = dim - 1.

    ``coeffs`` entries may be rationals, Laurent/HPoly scalars, exact
    :class:`Frac` quotients or complex numbers.  A Frac coefficient makes the
    result a Frac over the common denominator.
    """
    n = a.dim
    if check:
        last = a ** n
        bad = not last.is_zero() if a.exact else last.max_abs() > 1e-9 * max(1.0, a.max_abs()) ** n
        if bad:
            raise NotNilpotent(f"a^{n} != 0")
    coeffs = list(coeffs)[:n]
    use_frac = any(isinstance(c, Frac) for c in coeffs)
    total = None
    power = RingMatrix.identity(n, a.exact)
    for k, c in enumerate(coeffs):
        if k:
            power = power @ a
        if _is_zero_scalar(c):
            continue
        term = c * power
        if use_frac:
            term = _to_frac(term)
        total = term if total is None else total + term
    if total is None:
        total = RingMatrix.zeros(n, a.exact)
        if use_frac:
            total = _to_frac(total)
    return total


def _is_zero_scalar(c):
    if isinstance(c, (Frac, Laurent, HPoly)):
        return c.is_zero()
    return c == 0


# --- scalar backends ---------------------------------------------------------

class ExactRing:
    """Scalars for exact work over Q[h][s, 1/s], with q-integer quotients."""

    exact = True
    mode = "exact"
    classical = False

    def const(self, x):
        return HPoly.const(x)

    @property
    def h(self):
        return HPoly({1: 1})

    @property
    def half_h(self):
        return HPoly({1: Fraction(1, 2)})

    def h_power(self, k: int, coeff=1):
        return HPoly({k: coeff})

    def qint(self, k: int):
        return HPoly.const(qseries.q_integer(k))

    def s_pow(self, k: int):
        return HPoly.const(Laurent.monomial(k))

    def legendre_xi(self, n: int):
        return qseries.legendre_xi(n)

    def alpha(self, n: int):
        return qseries.alpha(n)

    def beta(self, n: int):
        return qseries.beta_recursive(n)

    def qdiff(self):
        return HPoly.const(Laurent.monomial(2) - Laurent.monomial(-2))

    def inv_qdiff(self):
        return Frac(Laurent.const(1), QDen({0: 1}), reduce=False)

    def half_bracket(self, two_x: int):
        return qseries.q_integer_half(two_x)

    def half_bracket_diag(self, two_xs):
        """diag([x_i]) for half-integral x_i = two_xs[i]/2."""
        m = RingMatrix.diag([Laurent.monomial(t) - Laurent.monomial(-t) for t in two_xs], True)
        return Frac(m, QDen({0: 1}), reduce=False)

    def sqrt_series(self, N: int):
        """Coefficients of (1 - y)^(1/2) in y, up to y^N."""
        return [c * (-1) ** k for k, c in enumerate(qseries.binomial_series(Fraction(1, 2), N))]

    def compare(self, lhs, rhs):
        diff = lhs - rhs
        if isinstance(diff, Frac):
            diff = diff.num
        if isinstance(diff, RingMatrix):
            bad = diff.nonzero_count()
        else:
            bad = 0 if diff.is_zero() else 1
        return float(bad), bad == 0

    def describe(self) -> dict:
        return {"mode": "exact", "ring": "Q[h][s,1/s] / q-integers"}


class ClassicalRing(ExactRing):
    """q = 1 specialisation of :class:`ExactRing` (entries in Q[h])."""

    classical = True
    mode = "exact"

    def qint(self, k: int):
        return HPoly.const(k)

    def s_pow(self, k: int):
        return HPoly.const(1)

    def legendre_xi(self, n: int):
        return Laurent.const(1)

    def alpha(self, n: int):
        return qseries.alpha_classical(n)

    def beta(self, n: int):
        return _classical_betas(n)[n]

    def qdiff(self):
        return HPoly.const(0)

    def inv_qdiff(self):
        raise NonGenericQ("q - 1/q vanishes at q = 1", index=0)

    def half_bracket(self, two_x: int):
        return Fraction(two_x, 2)

    def half_bracket_diag(self, two_xs):
        return RingMatrix.diag([Fraction(t, 2) for t in two_xs], True)

    def describe(self) -> dict:
        return {"mode": "exact", "ring": "Q[h] (q = 1)"}


@lru_cache(maxsize=None)
def _classical_betas(n: int):
    return tuple(qseries.beta_classical(n))


class NumericRing:
    """Complex scalars at the point (q, h) of a :class:`NumericContext`."""

    exact = False
    mode = "numeric"
    classical = False

    def __init__(self, ctx: NumericContext):
        self.ctx = ctx
        self._betas = {}

    def const(self, x):
        return complex(x)

    @property
    def h(self):
        return self.ctx.h

    @property
    def half_h(self):
        return self.ctx.h / 2

    def h_power(self, k: int, coeff=1):
        return complex(coeff) * self.ctx.h ** k

    def qint(self, k: int):
        return self.ctx.q_integer(k)

    def s_pow(self, k: int):
        return self.ctx.s ** k

    def legendre_xi(self, n: int):
        return qseries.legendre_at(n, (self.ctx.q ** 2 + self.ctx.q ** -2) / 2)

    def alpha(self, n: int):
        return qseries.alpha_numeric(n, self.ctx)

    def beta(self, n: int):
        if n not in self._betas:
            alphas = [self.alpha(k) for k in range(n + 1)]
            for k, b in enumerate(qseries.beta_sequence(alphas, n)):
                self._betas[k] = b
        return self._betas[n]

    def qdiff(self):
        return self.ctx.q - 1 / self.ctx.q

    def inv_qdiff(self):
        d = self.qdiff()
        if abs(d) <= self.ctx.singular_tol:
            raise NonGenericQ(f"q - 1/q vanishes at q = {self.ctx.q}", index=0)
        return 1 / d

    def half_bracket(self, two_x: int) -> complex:
        d = self.qdiff()
        if abs(d) <= self.ctx.singular_tol:
            return complex(two_x / 2)
        s = self.ctx.s
        return (s ** two_x - s ** -two_x) / d

    def half_bracket_diag(self, two_xs):
        return RingMatrix.diag([self.half_bracket(t) for t in two_xs], False)

    def sqrt_series(self, N: int):
        return [complex(c) * (-1) ** k for k, c in enumerate(qseries.binomial_series(Fraction(1, 2), N))]

    def compare(self, lhs, rhs):
        lhs_a = _as_array(lhs)
        rhs_a = _as_array(rhs)
        scale = max(1.0, float(np.abs(lhs_a).max(initial=0)), float(np.abs(rhs_a).max(initial=0)))
        res = float(np.abs(lhs_a - rhs_a).max(initial=0)) / scale
        return res, res < self.ctx.tol_abs

    def describe(self) -> dict:
        c = self.ctx
        return {
            "mode": "numeric",
            "q": [c.q.real, c.q.imag],
            "h": [c.h.real, c.h.imag],
            "tol_abs": c.tol_abs,
            "tol_rel": c.tol_rel,
        }


def _as_array(x):
    if isinstance(x, RingMatrix):
        return np.asarray(x.a, dtype=complex)
    return np.asarray(x, dtype=complex)


# --- representations -----------------------------------------------------------

@dataclass(frozen=True)
class RepSpec:
    two_j: int
    basis: str = "polynomial"

    def __post_init__(self):
        if self.two_j < 0:
            raise ValueError("two_j must be nonnegative")
        if self.basis not in ("polynomial", "symmetric"):
            raise ValueError(f"unknown basis {self.basis!r}")

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def two_ms(self) -> tuple:
        return tuple(self.two_j - 2 * i for i in range(self.dim))


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """J+, J- and the diagonal of 2*J0; the q^(+-J0) matrices are derived."""

    jp: RingMatrix
    jm: RingMatrix
    two_m: tuple
    ring: object
    spec: RepSpec | None = None

    @property
    def dim(self) -> int:
        return len(self.two_m)

    @property
    def exact(self) -> bool:
        return self.ring.exact

    @cached_property
    def j0(self) -> RingMatrix:
        return RingMatrix.diag([self.ring.const(Fraction(t, 2)) for t in self.two_m], self.exact)

    def q_pow_j0(self, k: int) -> RingMatrix:
        """q^(k J0) = diag(s^(k * twoM))."""
        return RingMatrix.diag([self.ring.s_pow(k * t) for t in self.two_m], self.exact)

    @cached_property
    def qj0_pos(self) -> RingMatrix:
        return self.q_pow_j0(1)

    @cached_property
    def qj0_neg(self) -> RingMatrix:
        return self.q_pow_j0(-1)

    def bracket_2j0(self, shift: int = 0) -> RingMatrix:
        """diag([2 J0 + shift])."""
        return RingMatrix.diag([self.ring.qint(t + shift) for t in self.two_m], self.exact)

    @cached_property
    def identity(self) -> RingMatrix:
        return RingMatrix.identity(self.dim, self.exact)


def _check_generic(ctx: NumericContext, two_j: int):
    if ctx is not None:
        ctx.require_generic(two_j + 1)


def build_uq_rep(spec: RepSpec, ctx: NumericContext | None = None, *, real: bool = False) -> GeneratorSet:
    """Generator matrices of the (2j+1)-dimensional irrep.

    Without ``ctx`` the polynomial basis is built exactly; with ``ctx`` the
    matrices are complex.  The symmetric basis requires ``ctx``.
    """
    ring = ExactRing() if ctx is None else NumericRing(ctx)
    if spec.basis == "symmetric" and ctx is None:
        raise ValueError("the symmetric basis is numeric only; pass a NumericContext")
    _check_generic(ctx, spec.two_j)
    dim, tj = spec.dim, spec.two_j
    exact = ring.exact
    jp = RingMatrix.zeros(dim, exact)
    jm = RingMatrix.zeros(dim, exact)
    for i, tm in enumerate(spec.two_ms):
        j_plus_m, j_minus_m = (tj + tm) // 2, (tj - tm) // 2
        if i > 0:  # raise m -> m + 1
            if spec.basis == "polynomial":
                jp.a[i - 1, i] = ring.const(1)
            else:
                jp.a[i - 1, i] = _sqrt_entry(ring.qint(j_minus_m) * ring.qint(j_plus_m + 1), real)
        if i < dim - 1:  # lower m -> m - 1
            val = ring.qint(j_plus_m) * ring.qint(j_minus_m + 1)
            jm.a[i + 1, i] = val if spec.basis == "polynomial" else _sqrt_entry(val, real)
    return GeneratorSet(jp, jm, spec.two_ms, ring, spec)


def _sqrt_entry(x: complex, real: bool) -> complex:
    if real and (abs(x.imag) > 1e-14 * max(1.0, abs(x)) or x.real < 0):
        raise NonGenericQ(f"q-integer product {x} under a square root is not positive")
    return cmath.sqrt(x)


def build_sl2_rep(two_j: int) -> GeneratorSet:
    """Classical sl(2) irrep in the polynomial basis, entries in Q[h] (q = 1)."""
    ring = ClassicalRing()
    spec = RepSpec(two_j)
    dim = spec.dim
    jp = RingMatrix.zeros(dim, True)
    jm = RingMatrix.zeros(dim, True)
    for i, tm in enumerate(spec.two_ms):
        if i > 0:
            jp.a[i - 1, i] = HPoly.const(1)
        if i < dim - 1:
            jm.a[i + 1, i] = HPoly.const(((two_j + tm) // 2) * ((two_j - tm) // 2 + 1))
    return GeneratorSet(jp, jm, spec.two_ms, ring, spec)


def basis_similarity(two_j: int, ctx: NumericContext) -> RingMatrix:
    """Diagonal S with poly = S^-1 sym S for J+ and J-."""
    spec = RepSpec(two_j, "symmetric")
    sym = build_uq_rep(spec, ctx)
    c = [1 + 0j] * spec.dim
    # column i is m = j - i; c_{m+1} = c_m * a_m, walking up from m = -j
    for i in range(spec.dim - 1, 0, -1):
        c[i - 1] = c[i] * sym.jp.a[i - 1, i]
    return RingMatrix.diag(c, False)


def power_action_check(spec: RepSpec, p: int, ctx: NumericContext) -> VerificationReport:
    """J+^p in the symmetric basis against the closed form of its entries."""
    if spec.basis != "symmetric":
        raise ValueError("power_action_check works in the symmetric basis")
    gen = build_uq_rep(spec, ctx)
    ring = gen.ring
    lhs = gen.jp ** p
    rhs = RingMatrix.zeros(spec.dim, False)
    tj = spec.two_j
    for i, tm in enumerate(spec.two_ms):
        jm_, jp_ = (tj - tm) // 2, (tj + tm) // 2  # j - m, j + m
        if jm_ - p < 0:
            continue
        val = (
            _qfact(ring, jm_) * _qfact(ring, jp_ + p) / (_qfact(ring, jp_) * _qfact(ring, jm_ - p))
        )
        rhs.a[i - p, i] = cmath.sqrt(val)
    res, ok = ring.compare(lhs, rhs)
    return VerificationReport("J+^p matrix vs closed form", "numeric", res, ok, "Eq41", tj, {"p": p})


def _two_j(gen: GeneratorSet):
    return gen.spec.two_j if gen.spec is not None else None


def verify_uq_relations(gen: GeneratorSet) -> list:
    """[J0, J+-] = +-J+-, [J+, J-] = [2 J0] and q^J0 q^-J0 = 1."""
    ring, tj = gen.ring, _two_j(gen)
    checks = [
        ("[J0,J+] = J+", commutator(gen.j0, gen.jp), gen.jp),
        ("[J0,J-] = -J-", commutator(gen.j0, gen.jm), -gen.jm),
        ("[J+,J-] = [2J0]", commutator(gen.jp, gen.jm), gen.bracket_2j0()),
        ("q^J0 q^-J0 = 1", gen.qj0_pos @ gen.qj0_neg, gen.identity),
    ]
    out = []
    for name, lhs, rhs in checks:
        res, ok = ring.compare(lhs, rhs)
        out.append(VerificationReport(name, ring.mode, res, ok, "Eq7", tj))
    return out


def verify_power_identity(gen: GeneratorSet, p: int) -> VerificationReport:
    """(q - 1/q)[J+^p, J-] = [p](q^J0 J+^(p-1) q^J0 - q^-J0 J+^(p-1) q^-J0)."""
    ring = gen.ring
    jp_p1 = gen.jp ** (p - 1)
    lhs = ring.qdiff() * commutator(gen.jp ** p, gen.jm)
    rhs = ring.qint(p) * (gen.qj0_pos @ jp_p1 @ gen.qj0_pos - gen.qj0_neg @ jp_p1 @ gen.qj0_neg)
    res, ok = ring.compare(lhs, rhs)
    return VerificationReport("[J+^p,J-] power identity", ring.mode, res, ok, "Eq9", _two_j(gen), {"p": p})


def verify_conjugation(gen: GeneratorSet) -> list:
    """q^(+-J0) f(J+) q^(-+J0) = f(q^(+-1) J+) for f(x) = sum h^k x^k / k!."""
    ring = gen.ring
    coeffs = [ring.h_power(k, Fraction(1, math.factorial(k))) for k in range(gen.dim)]
    f = nilpotent_series_eval(coeffs, gen.jp)
    out = []
    for sign, conj in ((1, gen.qj0_pos @ f @ gen.qj0_neg), (-1, gen.qj0_neg @ f @ gen.qj0_pos)):
        rhs = nilpotent_series_eval([c * ring.s_pow(2 * sign * k) for k, c in enumerate(coeffs)], gen.jp)
        res, ok = ring.compare(conj, rhs)
        name = "q^J0 f(J+) q^-J0 = f(qJ+)" if sign > 0 else "q^-J0 f(J+) q^J0 = f(J+/q)"
        out.append(VerificationReport(name, ring.mode, res, ok, "Eq25", _two_j(gen)))
    return out


def _qfact(ring, n: int) -> complex:
    out = 1 + 0j
    for k in range(1, n + 1):
        out *= ring.qint(k)
    return out


def classical_value(x):
    """Substitute q = 1 in an exact scalar or matrix."""
    return substitute_q_one(x)
