"""Verification suites and the coefficient tables behind the CLI reports."""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import coalgebra, deformmap, qseries, repcore
from .errors import ConfigError
from .repcore import RepSpec, build_sl2_rep, build_uq_rep
from .reports import VerificationReport
from .scalarring import Frac, NumericContext, scalar_to_json, substitute_q_one

__all__ = [
    "NumericPoint",
    "random_points",
    "exact_suite",
    "numeric_suite",
    "symmetric_suite",
    "limits_suite",
    "coproduct_suite",
    "coefficient_table",
    "matrix_dump",
]


@dataclass(frozen=True)
class NumericPoint:
    q: complex
    h: complex
    q_real: float  # used where principal square roots must stay on one branch

    def context(self, tol: float = 1e-10) -> NumericContext:
        return NumericContext(self.q, self.h, tol_abs=tol)

    def real_context(self, tol: float = 1e-10) -> NumericContext:
        return NumericContext(self.q_real, self.h, tol_abs=tol)


def _near_root_of_unity(q: complex, radius: float = 0.05, kmax: int = 15) -> bool:
    for k in range(1, kmax + 1):
        for r in range(2 * k):
            if abs(q - cmath.exp(1j * math.pi * r / k)) < radius:
                return True
    return False


def random_points(n: int, seed: int) -> list:
    """q in 0.5 < |q| < 2 away from 2k-th roots of unity (k <= 15), |h| < 1."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        q = rng.uniform(0.5, 2.0) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        h = math.sqrt(rng.random()) * 0.95 * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        q_real = rng.choice((rng.uniform(0.5, 0.95), rng.uniform(1.05, 2.0)))
        if _near_root_of_unity(q):
            continue
        out.append(NumericPoint(complex(round(q.real, 12), round(q.imag, 12)),
                                complex(round(h.real, 12), round(h.imag, 12)), round(q_real, 12)))
    return out


def _rep_checks(gen, *, exact: bool) -> list:
    """Every identity that holds on a single polynomial-basis irrep."""
    d = deformmap.build_deformed(gen)
    out = list(repcore.verify_uq_relations(gen))
    out += [repcore.verify_power_identity(gen, p) for p in range(1, gen.dim + 1)]
    out += repcore.verify_conjugation(gen)
    out += [
        deformmap.verify_main_commutator(d),
        deformmap.verify_hx_commutator(d, "source"),
        deformmap.verify_hy_commutator(d, "source"),
        deformmap.verify_hy_commutator(d, "inverted"),
        deformmap.verify_x_jminus(d),
        deformmap.verify_f_forms(gen),
        deformmap.verify_inversion(d),
    ]
    out += deformmap.verify_uv_relation(d)
    out += deformmap.casimir_check(gen)
    out += [deformmap.jacobi_check(d), deformmap.grading_check(d)]
    if exact:
        out += deformmap.h_zero_limit(d)
    return out


def exact_suite(two_js) -> list:
    out = []
    for tj in two_js:
        out += _rep_checks(build_uq_rep(RepSpec(tj)), exact=True)
    return out


def _with_point(reports, idx: int, pt: NumericPoint, q=None) -> list:
    extra = {"point": idx, "q": [pt.q.real, pt.q.imag] if q is None else [q, 0.0],
             "h": [pt.h.real, pt.h.imag]}
    return [VerificationReport(r.identity, r.mode, r.max_residual, r.passed, r.tag, r.two_j,
                               {**r.detail, **extra}) for r in reports]


def numeric_suite(two_js, points, tol: float = 1e-10) -> list:
    out = []
    for idx, pt in enumerate(points):
        ctx = pt.context(tol)
        for tj in two_js:
            ctx.require_generic(tj + 1)
            reps = _rep_checks(build_uq_rep(RepSpec(tj), ctx), exact=False)
            reps.append(deformmap.h_small_limit(RepSpec(tj), pt.q))
            out += _with_point(reps, idx, pt)
    return out


def symmetric_suite(two_js, points, tol: float = 1e-10) -> list:
    """Basis-action closed forms, at the real q of each point."""
    out = []
    for idx, pt in enumerate(points):
        ctx = pt.real_context(tol)
        for tj in two_js:
            spec = RepSpec(tj, "symmetric")
            reps = deformmap.normal_ordered_y_check(spec, ctx) + [deformmap.x_action_check(spec, ctx)]
            reps += [repcore.power_action_check(spec, p, ctx) for p in range(tj + 2)]
            out += _with_point(reps, idx, pt, q=pt.q_real)
    return out


def limits_suite(two_js) -> list:
    out = []
    for tj in two_js:
        out += deformmap.jordanian_limit_suite(tj)
        out += deformmap.limit_coherence(tj)
        out += deformmap.h_zero_limit(deformmap.build_deformed(build_uq_rep(RepSpec(tj))))
        out += repcore.verify_uq_relations(build_sl2_rep(tj))
    return out


def coproduct_suite(two_j_left: int, two_j_right: int, which=("uq", "qh", "uh"), ctx=None) -> list:
    pair = coalgebra.TensorRep(RepSpec(two_j_left), RepSpec(two_j_right))
    out = []
    if "uq" in which:
        out += coalgebra.uq_coproduct_checks(pair, ctx)
        if ctx is None:
            out += coalgebra.cocommutativity_check(pair)
    if "qh" in which:
        out += coalgebra.induced_coproduct_checks(pair, ctx)
    if "uh" in which:
        if ctx is not None:
            raise ConfigError("the Jordanian coproduct is checked exactly over Q[h] only")
        out += coalgebra.jordanian_coproduct_check(two_j_left, two_j_right)
    return out


# --- coefficient tables -----------------------------------------------------------

def _rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _frac_json(x: Frac) -> dict:
    return {"numerator": scalar_to_json(x.num), "denominator": x.den.to_json()}


def _complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def coefficient_table(max_n: int, ctx: NumericContext | None = None) -> dict:
    """alpha_n, beta_n and their classical values for n <= max_n."""
    if max_n < 0:
        raise ConfigError("max_n must be nonnegative")
    rows = {}
    classical_beta = qseries.beta_classical(max_n)
    tanh = qseries.tanh_coefficients(max_n)
    if ctx is not None:
        alphas = [qseries.alpha_numeric(n, ctx) for n in range(max_n + 1)]
        betas = qseries.beta_sequence(alphas, max_n)
    for n in range(max_n + 1):
        row = {
            "beta_symbolic": str(qseries.beta_symbolic(n)),
            "alpha_q1": _rational(substitute_q_one(qseries.alpha(n))),
            "beta_q1": _rational(classical_beta[n]),
            "tanh_coefficient": _rational(tanh[n]),
            "bernoulli_formula_n": _rational(qseries.bernoulli_tanh_coefficient(n)),
            "bernoulli_formula_n_plus_1": _rational(qseries.bernoulli_tanh_coefficient(n + 1)),
        }
        if ctx is None:
            row["alpha"] = _frac_json(qseries.alpha(n))
            row["beta"] = _frac_json(qseries.beta_recursive(n))
        else:
            row["alpha"] = _complex(alphas[n])
            row["beta"] = _complex(betas[n])
        rows[str(n)] = row
    shifted = all(Fraction(r["beta_q1"]) == Fraction(r["bernoulli_formula_n_plus_1"]) for r in rows.values())
    unshifted = all(Fraction(r["beta_q1"]) == Fraction(r["bernoulli_formula_n"]) for r in rows.values())
    note = {
        "beta_q1_equals_formula_at_n": unshifted,
        "beta_q1_equals_formula_at_n_plus_1": shifted,
        "comment": "the Bernoulli closed form matches beta_n at q = 1 only after shifting its index by one",
    }
    return {"rows": rows, "bernoulli_index_note": note}


def matrix_dump(spec: RepSpec, ctx: NumericContext | None = None) -> dict:
    gen = build_uq_rep(spec, ctx)
    out = {}
    for name, m in (("Jp", gen.jp), ("Jm", gen.jm), ("QJ0pos", gen.qj0_pos), ("QJ0neg", gen.qj0_neg)):
        if gen.exact:
            out[name] = [[scalar_to_json(c.coeff(0)) for c in row] for row in m.a]
        else:
            out[name] = [[_complex(c) for c in row] for row in m.a]
    out["two_m"] = list(gen.two_m)
    return out
