"""The nonlinear map U_q(sl(2)) -> U_{q,h}(sl(2)) on finite irreps.

Given a :class:`GeneratorSet` (J+, J-, J0) the map produces

    X = sum_n alpha_n (h/2)^(2n) J+^(2n+1)
    Y = (1 - (h J+/2)^2)^(1/2) J- (1 - (h J+/2)^2)^(1/2)
    H = J0

with every series terminating because J+ is nilpotent.  In exact mode X is a
:class:`Frac` whose denominator collects the q-integers [2n+1] of the alpha_n;
all checks compare numerators over a common denominator.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from . import qseries
from .repcore import (
    ClassicalRing,
    GeneratorSet,
    NumericRing,
    RepSpec,
    RingMatrix,
    build_sl2_rep,
    build_uq_rep,
    commutator,
    nilpotent_series_eval,
)
from .reports import VerificationReport
from .scalarring import Frac, NumericContext

__all__ = [
    "DeformedSet",
    "build_deformed",
    "jp_series",
    "x_series_coeffs",
    "verify_main_commutator",
    "verify_hx_commutator",
    "verify_hy_commutator",
    "verify_x_jminus",
    "verify_f_forms",
    "invert_map",
    "verify_inversion",
    "verify_uv_relation",
    "casimir_check",
    "jordanian_limit_suite",
    "h_zero_limit",
    "h_small_limit",
    "limit_coherence",
    "normal_ordered_y",
    "normal_ordered_y_check",
    "x_action_check",
    "jacobi_check",
    "grading_check",
]


@dataclass(frozen=True, eq=False)
class DeformedSet:
    xhat: object  # RingMatrix, or Frac over RingMatrix in exact mode
    yhat: RingMatrix
    hhat: RingMatrix
    source: GeneratorSet
    truncation: int

    @property
    def ring(self):
        return self.source.ring

    @property
    def two_j(self):
        spec = self.source.spec
        return spec.two_j if spec is not None else None


def _h_half_power(ring, k: int):
    """(h/2)^k as a ring scalar."""
    return ring.h_power(k, Fraction(1, 2 ** k))


def jp_series(gen: GeneratorSet, coeffs_by_power: dict, base=None):
    """sum_k c_k J+^k for the given {k: c_k} (``base`` replaces J+)."""
    base = gen.jp if base is None else base
    top = max(coeffs_by_power, default=0)
    coeffs = [coeffs_by_power.get(k, 0) for k in range(top + 1)]
    return nilpotent_series_eval(coeffs, base)


def x_series_coeffs(ring, dim: int, weight=None) -> dict:
    """{2n+1: weight(n) * alpha_n (h/2)^(2n)} up to J+^(dim-1)."""
    out = {}
    for n in range((dim - 2) // 2 + 1):
        if 2 * n + 1 > dim - 1:
            break
        c = ring.alpha(n)
        if weight is not None:
            c = weight(n) * c
        out[2 * n + 1] = c * _h_half_power(ring, 2 * n)
    return out


def _sqrt_dressing(gen: GeneratorSet, base=None):
    """(1 - (h/2 J+)^2)^(1/2) as a terminating series."""
    ring = gen.ring
    coeffs = {}
    for k, c in enumerate(ring.sqrt_series((gen.dim - 1) // 2)):
        coeffs[2 * k] = c * _h_half_power(ring, 2 * k)
    return jp_series(gen, coeffs, base)


def build_deformed(gen: GeneratorSet) -> DeformedSet:
    ring = gen.ring
    xhat = jp_series(gen, x_series_coeffs(ring, gen.dim))
    if gen.dim == 1:
        xhat = RingMatrix.zeros(1, gen.exact)
    dress = _sqrt_dressing(gen)
    yhat = dress @ gen.jm @ dress
    return DeformedSet(xhat, yhat, gen.j0, gen, gen.dim - 1)


def _report(ring, name, tag, lhs, rhs, two_j, **detail):
    res, ok = ring.compare(lhs, rhs)
    return VerificationReport(name, ring.mode, res, ok, tag, two_j, dict(detail))


# --- closure relations -------------------------------------------------------

def verify_main_commutator(d: DeformedSet) -> VerificationReport:
    lhs = commutator(d.xhat, d.yhat)
    rhs = d.source.bracket_2j0()
    return _report(d.ring, "[X,Y] = [2H]", "Eq26", lhs, rhs, d.two_j)


def _jp_for_reading(d: DeformedSet, reading: str):
    if reading == "source":
        return d.source.jp
    if reading == "inverted":
        rec = invert_map(d)
        if isinstance(rec, Frac):
            rec = rec.reduce()
            if rec.den:
                raise ArithmeticError("inverted J+ kept a denominator")
            rec = rec.num
        return rec
    raise ValueError(f"unknown reading {reading!r}")


def verify_hx_commutator(d: DeformedSet, reading: str = "source") -> VerificationReport:
    """[H,X] = sum (2n+1) alpha_n (h/2)^(2n) J+^(2n+1)."""
    ring, gen = d.ring, d.source
    jp = _jp_for_reading(d, reading)
    lhs = commutator(d.hhat, d.xhat)
    rhs = jp_series(gen, x_series_coeffs(ring, gen.dim, weight=lambda n: 2 * n + 1), base=jp)
    return _report(ring, "[H,X] = series in J+", "Eq27", lhs, rhs, d.two_j, reading=reading)


def _cayley_factor(gen: GeneratorSet, jp):
    """(1 + A)(1 - A)^-1 with A = (h/2 J+)^2, via the geometric series."""
    ring = gen.ring
    a = (ring.half_h * jp) @ (ring.half_h * jp)
    geom = nilpotent_series_eval([1] * gen.dim, a)
    return (gen.identity + a) @ geom


def verify_hy_commutator(d: DeformedSet, reading: str = "source") -> VerificationReport:
    gen = d.source
    jp = _jp_for_reading(d, reading)
    r = _cayley_factor(gen, jp)
    lhs = commutator(d.hhat, d.yhat)
    rhs = Fraction(-1, 2) * (r @ d.yhat + d.yhat @ r)
    return _report(d.ring, "[H,Y] = -1/2 (R Y + Y R)", "Eq28", lhs, rhs, d.two_j, reading=reading)


def _f_legendre(gen: GeneratorSet):
    ring = gen.ring
    coeffs = {}
    for n in range((gen.dim - 1) // 2 + 1):
        coeffs[2 * n] = ring.legendre_xi(n) * _h_half_power(ring, 2 * n)
    return jp_series(gen, coeffs)


def _f_product(gen: GeneratorSet, base=None):
    """(1 - (q v)^2)^(-1/2) (1 - (v/q)^2)^(-1/2) with v = h/2 J+."""
    ring = gen.ring
    cs = qseries.binomial_series(Fraction(-1, 2), (gen.dim - 1) // 2)
    left, right = {}, {}
    for k, c in enumerate(cs):
        w = c * (-1) ** k * _h_half_power(ring, 2 * k)
        left[2 * k] = w * ring.s_pow(4 * k)
        right[2 * k] = w * ring.s_pow(-4 * k)
    return jp_series(gen, left, base) @ jp_series(gen, right, base)


def verify_x_jminus(d: DeformedSet) -> VerificationReport:
    """(q - 1/q)-cleared form of [X, J-] in terms of F(h J+/2)."""
    ring, gen = d.ring, d.source
    f = _f_legendre(gen)
    lhs = commutator(d.xhat, gen.jm)
    rhs = ring.inv_qdiff() * (gen.qj0_pos @ f @ gen.qj0_pos - gen.qj0_neg @ f @ gen.qj0_neg)
    return _report(ring, "[X,J-] = (q^J0 F q^J0 - q^-J0 F q^-J0)/(q-1/q)", "Eq23", lhs, rhs, d.two_j)


def verify_f_forms(gen: GeneratorSet) -> VerificationReport:
    """Legendre-series and product forms of F on the matrix argument."""
    two_j = gen.spec.two_j if gen.spec else None
    return _report(gen.ring, "F(hJ+/2): Legendre series = product form", "Eq24",
                   _f_legendre(gen), _f_product(gen), two_j)


# --- inversion ---------------------------------------------------------------

def invert_map(d: DeformedSet, betas=None):
    """J+ = sum beta_n (h/2)^(2n) X^(2n+1)."""
    ring, dim = d.ring, d.source.dim
    terms = []
    x = d.xhat
    x2 = x @ x
    power = x
    for n in range((dim - 2) // 2 + 1):
        if 2 * n + 1 > dim - 1:
            break
        if n:
            power = power @ x2
            if isinstance(power, Frac):
                power = power.reduce()
        b = ring.beta(n) if betas is None else betas[n]
        terms.append((b * _h_half_power(ring, 2 * n)) * power)
    if not terms:
        return RingMatrix.zeros(dim, d.source.exact)
    total = terms[0]
    for t in terms[1:]:
        total = total + t
    return total


def verify_inversion(d: DeformedSet) -> VerificationReport:
    rec = invert_map(d)
    return _report(d.ring, "J+ recovered from X", "Eq14", rec, d.source.jp, d.two_j)


def _u_matrix(d: DeformedSet):
    ring, gen = d.ring, d.source
    hx = ring.half_h * d.xhat
    return ring.inv_qdiff() * (gen.qj0_pos @ hx @ gen.qj0_neg - gen.qj0_neg @ hx @ gen.qj0_pos)


def verify_uv_relation(d: DeformedSet) -> list:
    """u from X against sum P_n(xi) v^(2n+1) and against the product form."""
    ring, gen = d.ring, d.source
    u = _u_matrix(d)
    coeffs = {}
    for n in range((gen.dim - 2) // 2 + 1):
        if 2 * n + 1 <= gen.dim - 1:
            coeffs[2 * n + 1] = ring.legendre_xi(n) * _h_half_power(ring, 2 * n + 1)
    series = jp_series(gen, coeffs)
    v = ring.half_h * gen.jp
    prod = v @ _f_product(gen)
    return [
        _report(ring, "u = sum P_n(xi) v^(2n+1)", "Eq35", u, series, d.two_j),
        _report(ring, "u = v / sqrt((1-(qv)^2)(1-(v/q)^2))", "Eq36", u, prod, d.two_j),
    ]


# --- Casimir -----------------------------------------------------------------

def casimir_check(gen: GeneratorSet, spec: RepSpec | None = None) -> list:
    """Both orderings of C_q and their common eigenvalue [j][j+1]."""
    ring = gen.ring
    spec = spec or gen.spec
    two_m = list(gen.two_m)
    b0 = ring.half_bracket_diag(two_m)
    c1 = gen.jp @ gen.jm + b0 @ ring.half_bracket_diag([t - 2 for t in two_m])
    c2 = gen.jm @ gen.jp + b0 @ ring.half_bracket_diag([t + 2 for t in two_m])
    eig = ring.half_bracket(spec.two_j) * ring.half_bracket(spec.two_j + 2)
    scalar = eig * gen.identity
    return [
        _report(ring, "J+J- + [J0][J0-1] = J-J+ + [J0][J0+1]", "Eq48-49", c1, c2, spec.two_j),
        _report(ring, "C_q = [j][j+1] * 1", "Eq50", c1, scalar, spec.two_j),
    ]


# --- limits ------------------------------------------------------------------

def _classical_series(x, gen, kind: str):
    """sinh(hX)/h, cosh(hX) or exp(+-hX) as terminating series in X."""
    ring = gen.ring
    coeffs = []
    for k in range(gen.dim):
        if kind == "sinh_over_h":
            c = ring.h_power(k - 1, Fraction(1, math.factorial(k))) if k % 2 else 0
        elif kind == "cosh":
            c = 0 if k % 2 else ring.h_power(k, Fraction(1, math.factorial(k)))
        elif kind == "exp":
            c = ring.h_power(k, Fraction(1, math.factorial(k)))
        elif kind == "exp_neg":
            c = ring.h_power(k, Fraction((-1) ** k, math.factorial(k)))
        else:
            raise ValueError(kind)
        coeffs.append(c)
    return nilpotent_series_eval(coeffs, x)


def jordanian_relations(x, y, hm, gen, two_j, where="") -> list:
    """The three U_h(sl(2)) relations for the triple (x, y, hm)."""
    ring = gen.ring
    sh = _classical_series(x, gen, "sinh_over_h")
    ch = _classical_series(x, gen, "cosh")
    return [
        _report(ring, f"[H,X] = sinh(hX)/h{where}", "Eq3", commutator(hm, x), sh, two_j),
        _report(ring, f"[H,Y] = -1/2 (Y cosh hX + cosh hX Y){where}", "Eq4",
                commutator(hm, y), Fraction(-1, 2) * (y @ ch + ch @ y), two_j),
        _report(ring, f"[X,Y] = 2H{where}", "Eq5", commutator(x, y), 2 * hm, two_j),
    ]


def jordanian_limit_suite(two_j: int) -> list:
    """q = 1: the classical map and the U_h(sl(2)) relations, exact over Q[h]."""
    gen = build_sl2_rep(two_j)
    d = build_deformed(gen)
    ring = gen.ring
    x, y, hm = d.xhat, d.yhat, d.hhat
    out = jordanian_relations(x, y, hm, gen, two_j)
    sh = _classical_series(x, gen, "sinh_over_h")
    cas = (Fraction(1, 2) * (sh @ y + y @ sh) + Fraction(1, 4) * (ring.h_power(2) * (sh @ sh))
           + hm @ hm)
    classical = Fraction(1, 2) * (gen.jp @ gen.jm + gen.jm @ gen.jp) + gen.j0 @ gen.j0
    eig = Fraction(two_j * (two_j + 2), 4) * gen.identity
    out.append(_report(ring, "C(X,Y,H) = 1/2(J+J- + J-J+) + J0^2", "Eq6", cas, classical, two_j))
    out.append(_report(ring, "C = j(j+1) * 1", "Eq6", cas, eig, two_j))
    # the q -> 1 image of the [H,X] series equals the sinh form
    rhs27 = jp_series(gen, x_series_coeffs(ring, gen.dim, weight=lambda n: 2 * n + 1))
    out.append(_report(ring, "q->1 of [H,X] series = sinh(hX)/h", "Eq27->Eq3", rhs27, sh, two_j))
    return out


def h_zero_limit(d: DeformedSet) -> list:
    """Drop positive powers of h: X -> J+, Y -> J-, H -> J0."""
    ring, gen = d.ring, d.source
    x = d.xhat.map(lambda m: m.h_zero()) if isinstance(d.xhat, Frac) else d.xhat.h_zero()
    return [
        _report(ring, "X|h=0 = J+", "h->0", x, gen.jp, d.two_j),
        _report(ring, "Y|h=0 = J-", "h->0", d.yhat.h_zero(), gen.jm, d.two_j),
        _report(ring, "H = J0", "Eq12", d.hhat, gen.j0, d.two_j),
    ]


def h_small_limit(spec: RepSpec, q: complex, h: float = 1e-8, tol: float = 1e-6) -> VerificationReport:
    """Numeric continuity at small h: deformed and undeformed agree to ~h."""
    ctx = NumericContext(q, h)
    gen = build_uq_rep(spec, ctx)
    d = build_deformed(gen)
    ring = gen.ring
    rx, _ = ring.compare(d.xhat, gen.jp)
    ry, _ = ring.compare(d.yhat, gen.jm)
    res = max(rx, ry)
    return VerificationReport("X,Y at small h vs J+,J-", "numeric", res, res < tol, "h->0",
                              spec.two_j, {"h": h})


def limit_coherence(two_j: int) -> list:
    """(q -> 1 then build) against (build exactly then set s = 1)."""
    exact = build_deformed(build_uq_rep(RepSpec(two_j)))
    classical = build_deformed(build_sl2_rep(two_j))
    ring = classical.ring
    x1 = exact.xhat.at_q_one() if isinstance(exact.xhat, (Frac, RingMatrix)) else exact.xhat
    return [
        _report(ring, "X: limits commute", "q->1", x1, classical.xhat, two_j),
        _report(ring, "Y: limits commute", "q->1", exact.yhat.at_q_one(), classical.yhat, two_j),
    ]


# --- normal ordering and basis action ------------------------------------------

def normal_ordered_y(gen: GeneratorSet):
    """Y rebuilt from its normal-ordered double sum over (k, l)."""
    ring, dim = gen.ring, gen.dim
    kmax = (dim - 1) // 2
    cs = qseries.binomial_series(Fraction(1, 2), kmax)
    total = RingMatrix.zeros(dim, gen.exact)
    jp_pow = [gen.jp ** p for p in range(4 * kmax + 1)]
    for k in range(kmax + 1):
        for l in range(kmax + 1):
            p = k + l
            if 2 * p - 1 > dim - 1:
                continue
            w = ring.h_power(2 * p, Fraction((-1) ** p, 4 ** p) * cs[k] * cs[l])
            term = gen.jm @ jp_pow[2 * p]
            if k:
                term = term + ring.qint(2 * k) * (jp_pow[2 * p - 1] @ gen.bracket_2j0(2 * k + 4 * l - 1))
            total = total + w * term
    return total


def _qfact(ring, n: int):
    out = 1
    for k in range(1, n + 1):
        out = out * ring.qint(k)
    return out


def y_action_matrix(spec: RepSpec, ctx: NumericContext) -> RingMatrix:
    """Y from the explicit action on |j m>, bracket read as [j+m+2k+2l]."""
    ring = NumericRing(ctx)
    tj = spec.two_j
    kmax = tj // 2 + 1
    cs = qseries.binomial_series(Fraction(1, 2), kmax)
    out = RingMatrix.zeros(spec.dim, False)
    h2 = -(ctx.h ** 2) / 4
    for i, tm in enumerate(spec.two_ms):
        jpm, jmm = (tj + tm) // 2, (tj - tm) // 2  # j+m, j-m
        for k in range(kmax + 1):
            for l in range(kmax + 1):
                p = k + l
                w = h2 ** p * float(cs[k] * cs[l])
                val = 0j
                if jmm - 2 * p >= 0:
                    inner = (ring.qint(jpm + 2 * p) * ring.qint(jmm - 2 * p + 1)
                             * _qfact(ring, jmm) * _qfact(ring, jpm + 2 * p)
                             / (_qfact(ring, jpm) * _qfact(ring, jmm - 2 * p)))
                    val += cmath.sqrt(inner)
                if k and jmm - 2 * p + 1 >= 0:
                    inner = (_qfact(ring, jmm) * _qfact(ring, jpm + 2 * p - 1)
                             / (_qfact(ring, jpm) * _qfact(ring, jmm - 2 * p + 1)))
                    val += ring.qint(2 * k) * ring.qint(2 * k + 4 * l + tm - 1) * cmath.sqrt(inner)
                if val == 0:
                    continue
                target = tm + 2 * (2 * p - 1)
                if abs(target) > tj:
                    continue
                out.a[(tj - target) // 2, i] += w * val
    return out


def x_action_matrix(spec: RepSpec, ctx: NumericContext) -> RingMatrix:
    """X from its explicit action on |j m> in the symmetric basis."""
    ring = NumericRing(ctx)
    tj = spec.two_j
    out = RingMatrix.zeros(spec.dim, False)
    for i, tm in enumerate(spec.two_ms):
        jpm, jmm = (tj + tm) // 2, (tj - tm) // 2
        for k in range(tj + 1):
            p = 2 * k + 1
            if jmm - p < 0:
                break
            inner = (_qfact(ring, jmm) * _qfact(ring, jpm + p)
                     / (_qfact(ring, jpm) * _qfact(ring, jmm - p)))
            coef = (ctx.h / 2) ** (2 * k) * ring.alpha(k)
            out.a[i - p, i] += coef * cmath.sqrt(inner)
    return out


def x_action_check(spec: RepSpec, ctx: NumericContext) -> VerificationReport:
    gen = build_uq_rep(RepSpec(spec.two_j, "symmetric"), ctx)
    d = build_deformed(gen)
    return _report(gen.ring, "X matrix vs action on |jm>", "Eq42", d.xhat,
                   x_action_matrix(spec, ctx), spec.two_j)


def normal_ordered_y_check(spec: RepSpec, ctx: NumericContext) -> list:
    """Y three ways: product of dressings, normal-ordered sum, basis action."""
    gen = build_uq_rep(RepSpec(spec.two_j, "symmetric"), ctx)
    d = build_deformed(gen)
    ring = gen.ring
    no = normal_ordered_y(gen)
    act = y_action_matrix(spec, ctx)
    return [
        _report(ring, "Y product = normal-ordered sum", "Eq43-44", d.yhat, no, spec.two_j),
        _report(ring, "Y product = action on |jm> ([j+m+2k+2l] reading)", "Eq45-47",
                d.yhat, act, spec.two_j),
    ]


# --- structural sanity ---------------------------------------------------------

def jacobi_check(d: DeformedSet) -> VerificationReport:
    x, y, hm = d.xhat, d.yhat, d.hhat
    total = (commutator(commutator(x, y), hm) + commutator(commutator(y, hm), x)
             + commutator(commutator(hm, x), y))
    zero = RingMatrix.zeros(d.source.dim, d.source.exact)
    return _report(d.ring, "Jacobi identity for (X,Y,H)", "Jacobi", total, zero, d.two_j)


def grading_check(d: DeformedSet) -> VerificationReport:
    """H spectrum {-j..j}; X raises m by odd steps >= 1, Y by odd steps >= -1."""
    gen = d.source
    x = d.xhat.num if isinstance(d.xhat, Frac) else d.xhat
    bad = 0
    for i, ti in enumerate(gen.two_m):
        for k, tk in enumerate(gen.two_m):
            shift = (ti - tk) // 2
            nz_x = bool(x.a[i, k]) if gen.exact else abs(x.a[i, k]) > 1e-14
            nz_y = bool(d.yhat.a[i, k]) if gen.exact else abs(d.yhat.a[i, k]) > 1e-14
            if nz_x and not (shift >= 1 and shift % 2 == 1):
                bad += 1
            if nz_y and not (shift >= -1 and shift % 2 != 0):
                bad += 1
    spec_ok = d.hhat == gen.j0
    passed = bad == 0 and spec_ok
    mode = d.ring.mode
    return VerificationReport("H spectrum and X/Y grading", mode, float(bad + (not spec_ok)),
                              passed, "grading", d.two_j)
