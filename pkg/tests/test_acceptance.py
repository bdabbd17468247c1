"""The ten acceptance criteria, each at its stated tolerance.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary prints one
PASS/FAIL line per criterion.
"""
import cmath
import random
import time
from fractions import Fraction

import pytest
import sympy

from qhdeform import deformmap, qseries, repcore, suites
from qhdeform.repcore import RepSpec, build_uq_rep
from qhdeform.scalarring import NumericContext, substitute_q_one

SEED = 20240611


def _all_pass(reports):
    bad = [r.line() for r in reports if not r.passed]
    assert not bad, "\n".join(bad)


def test_criterion_01_exact_closure():
    start = time.perf_counter()
    reports = []
    for tj in range(1, 9):
        d = deformmap.build_deformed(build_uq_rep(RepSpec(tj)))
        reports.append(deformmap.verify_main_commutator(d))
    elapsed = time.perf_counter() - start
    _all_pass(reports)
    assert all(r.max_residual == 0 and r.mode == "exact" for r in reports)
    assert elapsed < 60, f"took {elapsed:.1f}s"


def test_criterion_02_auxiliary_identities():
    reports = []
    for tj in range(1, 7):
        gen = build_uq_rep(RepSpec(tj))
        d = deformmap.build_deformed(gen)
        reports += [repcore.verify_power_identity(gen, p) for p in range(1, gen.dim + 1)]
        reports += repcore.verify_conjugation(gen)
        reports += [
            deformmap.verify_x_jminus(d),
            deformmap.verify_hx_commutator(d),
            deformmap.verify_hy_commutator(d),
        ]
        reports.append(deformmap.verify_uv_relation(d)[0])
    tags = {r.tag for r in reports}
    assert tags == {"Eq9", "Eq25", "Eq23", "Eq27", "Eq28", "Eq35"}
    _all_pass(reports)
    assert all(r.max_residual == 0 for r in reports)


def _printed_beta_table():
    a = sympy.symbols("alpha1:7")
    a1, a2, a3, a4, a5, a6 = a
    return [
        -a1,
        -a2 + 3 * a1**2,
        -a3 + 8 * a2 * a1 - 12 * a1**3,
        -a4 + 10 * a3 * a1 + 5 * a2**2 - 55 * a2 * a1**2 + 55 * a1**4,
        -a5 + 12 * a4 * a1 + 12 * a3 * a2 - 78 * a3 * a1**2 - 78 * a2**2 * a1
        + 364 * a2 * a1**3 - 273 * a1**5,
        -a6 + 14 * a5 * a1 + 14 * a4 * a2 - 105 * a4 * a1**2 + 7 * a3**2
        - 210 * a3 * a2 * a1 + 560 * a3 * a1**3 - 35 * a2**3 + 840 * a2**2 * a1**2
        - 2380 * a2 * a1**4 + 1428 * a1**6,
    ]


def test_criterion_03_coefficient_table():
    for n, printed in enumerate(_printed_beta_table(), start=1):
        assert sympy.expand(qseries.beta_symbolic(n) - printed) == 0, n
    rng = random.Random(SEED)
    for _ in range(20):
        alphas = [Fraction(1)] + [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(10)]
        rec = qseries.beta_sequence(alphas, 10)
        orc = qseries.beta_oracle(10, alphas)
        assert rec == orc


def _tanh_taylor(n_max):
    w = sympy.Symbol("w")
    ser = sympy.series(sympy.tanh(w), w, 0, 2 * n_max + 3).removeO()
    return [Fraction(str(ser.coeff(w, 2 * n + 1))) for n in range(n_max + 1)]


def test_criterion_04_classical_collapse():
    for n in range(11):
        assert substitute_q_one(qseries.alpha(n)) == Fraction(1, 2 * n + 1)
    tanh = _tanh_taylor(6)
    exact_betas = [substitute_q_one(qseries.beta_recursive(n)) for n in range(7)]
    assert exact_betas == tanh
    assert tanh[1:4] == [Fraction(-1, 3), Fraction(2, 15), Fraction(-17, 315)]
    table = suites.coefficient_table(6)
    note = table["bernoulli_index_note"]
    assert note["beta_q1_equals_formula_at_n_plus_1"] is True
    assert note["beta_q1_equals_formula_at_n"] is False
    row = table["rows"]["1"]
    assert (row["beta_q1"], row["bernoulli_formula_n"]) == ("-1/3", "1")


def test_criterion_05_jordanian_suite():
    reports = []
    for tj in range(0, 7):
        reports += deformmap.jordanian_limit_suite(tj)
    assert {"Eq3", "Eq4", "Eq5", "Eq6"} <= {r.tag for r in reports}
    _all_pass(reports)


def test_criterion_06_casimir():
    reports = []
    for tj in range(0, 7):
        reports += deformmap.casimir_check(build_uq_rep(RepSpec(tj)))
    assert {r.tag for r in reports} == {"Eq48-49", "Eq50"}
    _all_pass(reports)


def test_criterion_07_inversion():
    reports = [deformmap.verify_inversion(deformmap.build_deformed(build_uq_rep(RepSpec(tj))))
               for tj in range(1, 9)]
    _all_pass(reports)
    rng = random.Random(SEED)
    worst = 0.0
    for pt in suites.random_points(100, SEED):
        ctx = NumericContext(pt.q, 0.0)
        u = 0.3 * rng.random() * cmath.exp(1j * rng.uniform(-cmath.pi, cmath.pi)) + 1e-4
        worst = max(worst, abs(qseries.u_of_v(qseries.v_of_u(u, ctx), ctx) - u))
    assert worst < 1e-10


def test_criterion_08_generating_function():
    coeffs = qseries.f_series(9)
    assert len(coeffs) == 10
    for n, c in enumerate(coeffs):
        assert c == qseries.legendre_xi(n)


def test_criterion_09_coproducts():
    start = time.perf_counter()
    reports = []
    for a, b in ((1, 1), (1, 2)):
        reports += suites.coproduct_suite(a, b)
    elapsed = time.perf_counter() - start
    tags = {r.tag for r in reports}
    assert {"Eq8", "Eq26", "Eq27", "Eq28", "Eq54"} <= tags
    assert {"Eq55-57/Eq3", "Eq55-57/Eq4", "Eq55-57/Eq5"} <= tags
    _all_pass(reports)
    assert all(r.mode == "exact" for r in reports)
    assert elapsed < 120


def test_criterion_10_numeric_consistency():
    points = suites.random_points(5, SEED)
    reports = suites.numeric_suite(range(1, 9), points, tol=1e-10)
    sym = suites.symmetric_suite(range(1, 5), points, tol=1e-10)
    assert {"Eq42", "Eq45-47"} <= {r.tag for r in sym}
    _all_pass(reports + sym)
    exact_tags = {r.tag for r in suites.exact_suite([2])} - {"h->0", "Eq12"}
    assert exact_tags <= {r.tag for r in reports}


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
