"""Exact scalars: Laurent polynomials in s = q^(1/2), polynomials in h over
them, and quotients by q-integers.

All three types are immutable.  Rational coefficients are
:class:`fractions.Fraction` (stored as plain ``int`` when integral, which
compares and hashes identically and is much faster).
"""
from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .errors import DivisionNotExact, NonGenericQ

__all__ = [
    "Laurent",
    "HPoly",
    "QDen",
    "Frac",
    "NumericContext",
    "S",
    "eval_numeric",
    "substitute_q_one",
    "scalar_to_json",
    "scalar_from_json",
    "hpoly_to_json",
    "hpoly_from_json",
]


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _as_rational(x):
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return _norm(x)
    if isinstance(x, Rational):
        return _norm(Fraction(x.numerator, x.denominator))
    raise TypeError(f"not a rational: {x!r}")


class Laurent:
    """Laurent polynomial in s with rational coefficients.

    ``Laurent({2: 1, -2: 1})`` is s^2 + s^-2 = q + 1/q.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                v = _as_rational(v)
                if v:
                    c[int(e)] = v
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c):
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def const(cls, x) -> Laurent:
        x = _as_rational(x)
        return cls._raw({0: x} if x else {})

    @classmethod
    def monomial(cls, exp: int, coeff=1) -> Laurent:
        return cls({exp: coeff})

    @classmethod
    def coerce(cls, x) -> Laurent:
        if isinstance(x, Laurent):
            return x
        return cls.const(x)

    # --- inspection ---------------------------------------------------------
    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def __bool__(self):
        return bool(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return not self._c or set(self._c) == {0}

    def constant(self):
        return self._c.get(0, 0)

    def degree(self):
        return max(self._c) if self._c else None

    def valuation(self):
        return min(self._c) if self._c else None

    def __eq__(self, other):
        if isinstance(other, Laurent):
            return self._c == other._c
        try:
            return self._c == Laurent.const(other)._c
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # --- ring operations ----------------------------------------------------
    def __neg__(self):
        return Laurent._raw({e: -v for e, v in self._c.items()})

    def __add__(self, other):
        if isinstance(other, (HPoly, Frac)) or not _scalar_like(other):
            return NotImplemented
        other = Laurent.coerce(other)
        if not other._c:
            return self
        if not self._c:
            return other
        c = dict(self._c)
        for e, v in other._c.items():
            w = c.get(e, 0) + v
            if w:
                c[e] = _norm(w)
            else:
                c.pop(e, None)
        return Laurent._raw(c)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (HPoly, Frac)) or not _scalar_like(other):
            return NotImplemented
        return self + (-Laurent.coerce(other))

    def __rsub__(self, other):
        return Laurent.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (HPoly, Frac)) or not _scalar_like(other):
            return NotImplemented
        if not isinstance(other, Laurent):
            x = _as_rational(other)
            if not x:
                return Laurent._raw({})
            if x == 1:
                return self
            return Laurent._raw({e: _norm(v * x) for e, v in self._c.items()})
        a, b = self._c, other._c
        if not a or not b:
            return Laurent._raw({})
        if len(a) < len(b):
            a, b = b, a
        c = {}
        for e2, v2 in b.items():
            for e1, v1 in a.items():
                e = e1 + e2
                c[e] = c.get(e, 0) + v1 * v2
        return Laurent._raw({e: _norm(v) for e, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) == 1:
                (e, v), = self._c.items()
                return Laurent({e * n: Fraction(1) / Fraction(v) ** (-n)})
            raise DivisionNotExact("only monomials are units in the Laurent ring")
        result = Laurent.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divmod_exact(self, other: Laurent):
        """Return (quotient, is_exact) for division in the Laurent ring."""
        other = Laurent.coerce(other)
        if not other._c:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self._c:
            return Laurent._raw({}), True
        va, vb = self.valuation(), other.valuation()
        a = _dense(self._c, va)
        b = _dense(other._c, vb)
        if len(b) > len(a):
            return None, False
        if b[-1] in (1, -1) and all(isinstance(x, int) for x in b):
            return _monic_divide(a, b, va - vb)
        lead = Fraction(b[-1])
        q = [0] * (len(a) - len(b) + 1)
        r = [Fraction(x) for x in a]
        for i in range(len(q) - 1, -1, -1):
            coef = r[i + len(b) - 1] / lead
            q[i] = coef
            if coef:
                for k, bk in enumerate(b):
                    r[i + k] -= coef * bk
        if any(r):
            return None, False
        return Laurent({i + va - vb: v for i, v in enumerate(q)}), True

    def exact_div(self, other) -> Laurent:
        if not isinstance(other, Laurent):
            x = _as_rational(other)
            if not x:
                raise ZeroDivisionError("division by zero")
            return Laurent._raw({e: _norm(Fraction(v) / x) for e, v in self._c.items()})
        quo, ok = self.divmod_exact(other)
        if not ok:
            raise DivisionNotExact(f"{self} is not divisible by {other}")
        return quo

    def divides(self, other: Laurent) -> bool:
        return Laurent.coerce(other).divmod_exact(self)[1]

    # --- substitutions ------------------------------------------------------
    def subs_s(self, s):
        if not self._c:
            return 0 * s
        return sum(v * s ** e for e, v in self._c.items())

    def at_q_one(self):
        return _norm(Fraction(sum(self._c.values())))

    def q_inverse(self) -> Laurent:
        """Apply q -> 1/q (s -> 1/s)."""
        return Laurent._raw({-e: v for e, v in self._c.items()})

    def __repr__(self):
        return f"Laurent({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e, v in sorted(self._c.items(), reverse=True):
            if e == 0:
                parts.append(str(v))
            else:
                mon = "s" if e == 1 else f"s^{e}"
                if v == 1:
                    parts.append(mon)
                elif v == -1:
                    parts.append("-" + mon)
                else:
                    parts.append(f"({v})*{mon}")
        return " + ".join(parts).replace("+ -", "- ")


def _monic_divide(a, b, shift):
    # integer long division after scaling a by its coefficient lcm
    scale = 1
    for x in a:
        if isinstance(x, Fraction):
            scale = scale * x.denominator // math.gcd(scale, x.denominator)
    r = [int(x * scale) for x in a]
    lead = b[-1]
    nb = len(b)
    q = [0] * (len(a) - nb + 1)
    for i in range(len(q) - 1, -1, -1):
        coef = r[i + nb - 1] * lead
        q[i] = coef
        if coef:
            for k, bk in enumerate(b):
                if bk:
                    r[i + k] -= coef * bk
    if any(r):
        return None, False
    return Laurent({i + shift: Fraction(v, scale) for i, v in enumerate(q)}), True


def _dense(c, shift):
    top = max(c) - shift
    out = [0] * (top + 1)
    for e, v in c.items():
        out[e - shift] = v
    return out


def _scalar_like(x):
    return isinstance(x, (Laurent, int, Fraction)) and not isinstance(x, bool)


S = Laurent.monomial(1)
ONE = Laurent.const(1)
ZERO = Laurent.const(0)


class HPoly:
    """Polynomial in h with Laurent coefficients (sparse: power -> Laurent)."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=None):
        c = {}
        if coeffs is not None:
            items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
            for k, v in items:
                if k < 0:
                    raise ValueError("negative power of h")
                v = Laurent.coerce(v)
                if v:
                    c[int(k)] = v
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c):
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def const(cls, x) -> HPoly:
        x = Laurent.coerce(x)
        return cls._raw({0: x} if x else {})

    @classmethod
    def coerce(cls, x) -> HPoly:
        if isinstance(x, HPoly):
            return x
        return cls.const(x)

    @classmethod
    def h_power(cls, k: int, coeff=1) -> HPoly:
        return cls({k: coeff})

    @property
    def coeffs(self) -> list:
        """Dense coefficient list, index = power of h, trailing zeros trimmed."""
        if not self._c:
            return []
        return [self._c.get(k, ZERO) for k in range(max(self._c) + 1)]

    def coeff(self, k: int) -> Laurent:
        return self._c.get(k, ZERO)

    def degree(self):
        return max(self._c) if self._c else None

    def __bool__(self):
        return bool(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def __eq__(self, other):
        if isinstance(other, HPoly):
            return self._c == other._c
        if isinstance(other, Frac):
            return NotImplemented
        try:
            return self._c == HPoly.const(other)._c
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __neg__(self):
        return HPoly._raw({k: -v for k, v in self._c.items()})

    def __add__(self, other):
        if isinstance(other, Frac):
            return NotImplemented
        if not isinstance(other, HPoly):
            if not _scalar_like(other):
                return NotImplemented
            other = HPoly.const(other)
        if not other._c:
            return self
        if not self._c:
            return other
        c = dict(self._c)
        for k, v in other._c.items():
            w = c[k] + v if k in c else v
            if w:
                c[k] = w
            else:
                c.pop(k, None)
        return HPoly._raw(c)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Frac):
            return NotImplemented
        if not isinstance(other, HPoly) and not _scalar_like(other):
            return NotImplemented
        return self + (-HPoly.coerce(other))

    def __rsub__(self, other):
        return HPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Frac):
            return NotImplemented
        if not isinstance(other, HPoly):
            if not _scalar_like(other):
                return NotImplemented
            if not self._c:
                return self
            other = Laurent.coerce(other)
            if not other:
                return HPoly._raw({})
            return HPoly._raw({k: v * other for k, v in self._c.items()})
        if not self._c or not other._c:
            return HPoly._raw({})
        c = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                k = k1 + k2
                p = v1 * v2
                c[k] = c[k] + p if k in c else p
        return HPoly._raw({k: v for k, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers of HPoly are not polynomials")
        result = HPoly.const(1)
        for _ in range(n):
            result = result * self
        return result

    def exact_div(self, other) -> HPoly:
        """Divide every h-coefficient by a Laurent scalar."""
        return HPoly._raw({k: v.exact_div(other) for k, v in self._c.items()})

    def divisible_by(self, other: Laurent) -> bool:
        return all(other.divides(v) for v in self._c.values())

    def h_zero(self) -> HPoly:
        """Drop every positive power of h."""
        return HPoly._raw({0: self._c[0]} if 0 in self._c else {})

    def at_q_one(self) -> HPoly:
        return HPoly({k: v.at_q_one() for k, v in self._c.items()})

    def q_inverse(self) -> HPoly:
        return HPoly._raw({k: v.q_inverse() for k, v in self._c.items()})

    def subs(self, s, h):
        if not self._c:
            return 0 * s
        return sum(v.subs_s(s) * h ** k for k, v in self._c.items())

    def __repr__(self):
        return f"HPoly({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c):
            v = self._c[k]
            if k == 0:
                parts.append(f"({v})")
            else:
                parts.append(f"({v})*h^{k}")
        return " + ".join(parts)


# --- quotients by q-integers ------------------------------------------------

@lru_cache(maxsize=None)
def _factor_value(k: int) -> Laurent:
    # key 0 stands for (q - 1/q); key k >= 1 for the q-integer [k]
    if k == 0:
        return Laurent({2: 1, -2: -1})
    return Laurent({2 * (k - 1 - 2 * i): 1 for i in range(k)})


class QDen:
    """Product of q-integers [k]^e (k >= 1) and powers of (q - 1/q) (key 0)."""

    __slots__ = ("_f",)

    def __init__(self, factors=None):
        f = {}
        for k, e in (factors or {}).items():
            if k < 0:
                raise ValueError("use [-k] = -[k] before building a denominator")
            if e < 0:
                raise ValueError("negative exponent")
            if k == 1 or e == 0:
                continue
            f[int(k)] = int(e)
        self._f = tuple(sorted(f.items()))

    @property
    def factors(self) -> dict:
        return dict(self._f)

    def __bool__(self):
        return bool(self._f)

    def __eq__(self, other):
        return isinstance(other, QDen) and self._f == other._f

    def __hash__(self):
        return hash(self._f)

    def __mul__(self, other: QDen) -> QDen:
        c = Counter(dict(self._f))
        c.update(dict(other._f))
        return QDen(c)

    def __pow__(self, n: int) -> QDen:
        return QDen({k: e * n for k, e in self._f})

    def lcm(self, other: QDen) -> QDen:
        a, b = dict(self._f), dict(other._f)
        return QDen({k: max(a.get(k, 0), b.get(k, 0)) for k in set(a) | set(b)})

    def cofactor(self, other: QDen) -> QDen:
        """self / other, requiring other | self as multisets."""
        a, b = dict(self._f), dict(other._f)
        out = {}
        for k, e in a.items():
            r = e - b.get(k, 0)
            if r < 0:
                raise ValueError("not a sub-multiset")
            out[k] = r
        if any(k not in a for k in b):
            raise ValueError("not a sub-multiset")
        return QDen(out)

    def value(self) -> Laurent:
        return _den_value(self._f)

    def evaluate(self, ctx: NumericContext) -> complex:
        out = 1
        for k, e in self._f:
            v = _factor_value(k).subs_s(ctx.s)
            if abs(v) <= ctx.singular_tol:
                what = "q - 1/q" if k == 0 else f"[{k}]"
                raise NonGenericQ(f"{what} vanishes at q = {ctx.q}", index=k)
            out *= v ** e
        return out

    def at_q_one(self):
        out = 1
        for k, e in self._f:
            if k == 0:
                raise NonGenericQ("q - 1/q vanishes at q = 1", index=0)
            out *= k ** e
        return out

    def to_json(self):
        return {str(k): e for k, e in self._f}

    def __repr__(self):
        inner = "*".join(
            ("(q-1/q)" if k == 0 else f"[{k}]") + (f"^{e}" if e > 1 else "")
            for k, e in self._f
        )
        return f"QDen({inner or '1'})"


@lru_cache(maxsize=4096)
def _den_value(f) -> Laurent:
    out = ONE
    for k, e in f:
        out = out * _factor_value(k) ** e
    return out


def _num_is_zero(x):
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return not x


class Frac:
    """``num / den`` with ``den`` a :class:`QDen`.

    The numerator may be any ring element that can be multiplied by a
    :class:`Laurent` (Laurent, HPoly, or a matrix).  Sums are formed over the
    least common multiple of the denominators, so testing the numerator of a
    difference for zero is the same as checking the cross-multiplied identity.
    Scalar numerators are reduced by trial division on construction.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den: QDen | None = None, *, reduce=True):
        den = den if den is not None else QDen()
        if isinstance(num, (int, Fraction)):
            num = Laurent.const(num)
        if reduce and den and isinstance(num, (Laurent, HPoly)):
            num, den = _cancel(num, den)
        self.num = num
        self.den = den

    @classmethod
    def lift(cls, x) -> Frac:
        return x if isinstance(x, Frac) else cls(x)

    def is_zero(self) -> bool:
        return _num_is_zero(self.num)

    def __bool__(self):
        return not self.is_zero()

    def __neg__(self):
        return Frac(-self.num, self.den, reduce=False)

    def _combine(self, other, sign):
        if not isinstance(other, Frac):
            other = Frac(other, reduce=False)
        if self.den == other.den:
            num = self.num + other.num if sign > 0 else self.num - other.num
            return Frac(num, self.den)
        den = self.den.lcm(other.den)
        a = self.num
        ca = den.cofactor(self.den)
        if ca:
            a = a * ca.value()
        b = other.num
        cb = den.cofactor(other.den)
        if cb:
            b = b * cb.value()
        return Frac(a + b if sign > 0 else a - b, den)

    def __add__(self, other):
        return self._combine(other, 1)

    def __radd__(self, other):
        return Frac(other, reduce=False)._combine(self, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return Frac(other, reduce=False)._combine(self, -1)

    def __mul__(self, other):
        if isinstance(other, Frac):
            return Frac(self.num * other.num, self.den * other.den)
        return Frac(self.num * other, self.den)

    def __rmul__(self, other):
        if isinstance(other, Frac):
            return Frac(other.num * self.num, other.den * self.den)
        return Frac(other * self.num, self.den)

    def __matmul__(self, other):
        if isinstance(other, Frac):
            return Frac(self.num @ other.num, self.den * other.den, reduce=False)
        return Frac(self.num @ other, self.den, reduce=False)

    def __rmatmul__(self, other):
        return Frac(other @ self.num, self.den, reduce=False)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = Frac(ONE)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Frac) or _scalar_like(other) or isinstance(other, HPoly):
            return (self - other).is_zero()
        return NotImplemented

    __hash__ = None

    def map(self, fn) -> Frac:
        """Apply ``fn`` to the numerator, keeping the denominator."""
        return Frac(fn(self.num), self.den, reduce=False)

    def reduce(self) -> Frac:
        """Cancel denominator factors that divide the numerator exactly."""
        if isinstance(self.num, (Laurent, HPoly)):
            return Frac(self.num, self.den)
        if hasattr(self.num, "exact_div") and hasattr(self.num, "divisible_by"):
            num, den = self.num, dict(self.den.factors)
            for k in sorted(den):
                while den[k] and num.divisible_by(_factor_value(k)):
                    num = num.exact_div(_factor_value(k))
                    den[k] -= 1
            return Frac(num, QDen(den), reduce=False)
        return self

    def evaluate(self, ctx: NumericContext):
        return (1 / self.den.evaluate(ctx)) * eval_numeric(self.num, ctx)

    def at_q_one(self):
        d = self.den.at_q_one()
        num = substitute_q_one(self.num)
        return num * Fraction(1, d) if d != 1 else num

    def __repr__(self):
        return f"Frac({self.num!r}, {self.den!r})"


def _cancel(num, den: QDen):
    if _num_is_zero(num):
        return num, QDen()
    f = dict(den.factors)
    for k in sorted(f):
        fv = _factor_value(k)
        while f[k]:
            if isinstance(num, Laurent):
                quo, ok = num.divmod_exact(fv)
                if not ok:
                    break
                num = quo
            else:
                if not num.divisible_by(fv):
                    break
                num = num.exact_div(fv)
            f[k] -= 1
    return num, QDen(f)


# --- numeric evaluation -----------------------------------------------------

@dataclass(frozen=True)
class NumericContext:
    """Complex values for q and h plus tolerances for floating checks."""

    q: complex
    h: complex = 0.0
    tol_abs: float = 1e-10
    tol_rel: float = 1e-8
    singular_tol: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "q", complex(self.q))
        object.__setattr__(self, "h", complex(self.h))
        if self.q == 0:
            raise ValueError("q must be nonzero")
        if self.tol_abs < 0 or self.tol_rel < 0:
            raise ValueError("tolerances must be nonnegative")

    @property
    def s(self) -> complex:
        return cmath.sqrt(self.q)

    def q_integer(self, k: int) -> complex:
        """Numeric [k] via its Laurent expansion (well defined at q = +-1)."""
        return _factor_value(abs(k)).subs_s(self.s) * (1 if k >= 0 else -1) if k else 0j

    def require_generic(self, max_index: int) -> None:
        """Raise NonGenericQ if any [k], 1 <= k <= max_index, vanishes."""
        for k in range(2, max_index + 1):
            if abs(self.q_integer(k)) <= self.singular_tol:
                raise NonGenericQ(f"[{k}] vanishes at q = {self.q}", index=k)


def eval_numeric(x, ctx: NumericContext):
    """Substitute s = sqrt(q) (principal branch) and h = ctx.h."""
    if isinstance(x, Frac):
        return x.evaluate(ctx)
    if isinstance(x, HPoly):
        return complex(x.subs(ctx.s, ctx.h))
    if isinstance(x, Laurent):
        return complex(x.subs_s(ctx.s))
    if isinstance(x, (int, Fraction)):
        return complex(x)
    if hasattr(x, "evaluate"):
        return x.evaluate(ctx)
    raise TypeError(f"cannot evaluate {type(x).__name__}")


def substitute_q_one(x):
    """Set s = 1: Laurent -> rational, HPoly -> HPoly with rational coefficients."""
    if isinstance(x, (Laurent, HPoly, Frac)):
        return x.at_q_one()
    if isinstance(x, (int, Fraction)):
        return x
    if hasattr(x, "at_q_one"):
        return x.at_q_one()
    raise TypeError(f"cannot substitute into {type(x).__name__}")


# --- JSON ---------------------------------------------------------------------

def scalar_to_json(x: Laurent) -> dict:
    x = Laurent.coerce(x)
    return {
        "s_powers": {
            str(e): [Fraction(v).numerator, Fraction(v).denominator] for e, v in x.items()
        }
    }


def scalar_from_json(obj: dict) -> Laurent:
    return Laurent({int(e): Fraction(n, d) for e, (n, d) in obj["s_powers"].items()})


def hpoly_to_json(p: HPoly) -> list:
    return [scalar_to_json(c) for c in HPoly.coerce(p).coeffs]


def hpoly_from_json(arr: list) -> HPoly:
    return HPoly([scalar_from_json(c) for c in arr])
