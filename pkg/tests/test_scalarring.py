import cmath
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qhdeform import qseries
from qhdeform.errors import DivisionNotExact, NonGenericQ
from qhdeform.scalarring import (
    Frac,
    HPoly,
    Laurent,
    NumericContext,
    QDen,
    S,
    eval_numeric,
    hpoly_from_json,
    hpoly_to_json,
    scalar_from_json,
    scalar_to_json,
    substitute_q_one,
)

from strategies import hpolys, laurents

qint = qseries.q_integer
generic_q = st.builds(
    lambda r, t: r * cmath.exp(1j * t), st.floats(0.6, 1.8), st.floats(0.2, 1.3)
)


def test_difference_of_squares():
    a = Laurent({2: 1, -2: 1})
    b = Laurent({2: 1, -2: -1})
    assert a * b == Laurent({4: 1, -4: -1})


def test_qint_two_squared():
    assert qint(2) * qint(2) == qint(1) + qint(3)


def test_hpoly_cancellation():
    q = Laurent.monomial(2)
    assert HPoly([1, 0, q]) - HPoly.const(1) == HPoly.h_power(2, q)


@pytest.mark.parametrize("a,b", [(3, 1), (5, 2), (4, 4), (2, 6), (7, 0)])
def test_qint_three_term_identity(a, b):
    # [a][b+1] - [a+1][b] = [a-b], the identity behind the polynomial basis
    assert qint(a) * qint(b + 1) - qint(a + 1) * qint(b) == qint(a - b)


def test_eval_examples():
    assert eval_numeric(qint(2), NumericContext(2)) == pytest.approx(2.5)
    assert eval_numeric(qseries.xi(), NumericContext(1)) == pytest.approx(1)
    assert eval_numeric(Laurent.monomial(4), NumericContext(3)) == pytest.approx(9)


def test_q_one_examples():
    assert substitute_q_one(qint(3)) == 3
    assert substitute_q_one(qseries.xi()) == 1
    assert substitute_q_one(Laurent({5: 1, -5: -1})) == 0


def test_exact_division():
    a = qint(3) * qint(5)
    assert a.exact_div(qint(5)) == qint(3)
    with pytest.raises(DivisionNotExact):
        qint(3).exact_div(qint(2))


def test_q_integer_division_pattern():
    # [2n]/[n] = q^n + q^-n
    for n in range(1, 6):
        assert qint(2 * n).exact_div(qint(n)) == Laurent({2 * n: 1, -2 * n: 1})


@given(laurents)
def test_self_subtraction_is_canonical_zero(a):
    z = a - a
    assert z.is_zero() and z == Laurent() and not z.coeffs


@given(laurents, laurents, laurents)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(hpolys, hpolys, hpolys)
@settings(max_examples=60)
def test_hpoly_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert (a - a).is_zero()


@given(laurents, laurents, generic_q)
def test_evaluation_is_a_homomorphism(a, b, q):
    ctx = NumericContext(q)
    lhs = eval_numeric(a * b, ctx)
    rhs = eval_numeric(a, ctx) * eval_numeric(b, ctx)
    assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(lhs), abs(rhs))
    assert abs(eval_numeric(a + b, ctx) - eval_numeric(a, ctx) - eval_numeric(b, ctx)) < 1e-8 * max(
        1.0, abs(eval_numeric(a, ctx)), abs(eval_numeric(b, ctx))
    )


@given(laurents)
def test_q_one_agrees_with_evaluation(a):
    assert complex(substitute_q_one(a)) == pytest.approx(eval_numeric(a, NumericContext(1.0)), abs=1e-9)


@given(laurents, laurents)
def test_exact_division_round_trip(a, b):
    if b.is_zero():
        return
    assert (a * b).exact_div(b) == a


@given(laurents)
def test_json_round_trip(a):
    text = json.dumps(scalar_to_json(a))
    assert scalar_from_json(json.loads(text)) == a


@given(hpolys)
def test_hpoly_json_round_trip(p):
    assert hpoly_from_json(json.loads(json.dumps(hpoly_to_json(p)))) == p


def test_hpoly_trims_trailing_zeros():
    p = HPoly([1, 0, 0])
    assert p.coeffs == [Laurent.const(1)]
    assert HPoly([0, 0]).is_zero()


def test_hpoly_substitution():
    p = HPoly([1, S, Laurent.monomial(4)])  # 1 + s h + q^2 h^2
    assert complex(p.subs(2.0, 0.5)) == pytest.approx(1 + 1 + 4)
    assert p.h_zero() == HPoly.const(1)
    assert p.at_q_one() == HPoly([1, 1, 1])


def test_qden_lcm_and_cofactor():
    a = QDen({3: 1, 5: 1})
    b = QDen({3: 2})
    lcm = a.lcm(b)
    assert lcm == QDen({3: 2, 5: 1})
    assert a * lcm.cofactor(a) == lcm
    assert lcm.cofactor(b) == QDen({5: 1})


def test_frac_arithmetic_and_reduction():
    third = Frac(Laurent.const(1), QDen({3: 1}))
    fifth = Frac(Laurent.const(1), QDen({5: 1}))
    total = third + fifth
    assert total.den == QDen({3: 1, 5: 1})
    assert total.num == qint(3) + qint(5)
    assert Frac(qint(3) * qint(2), QDen({3: 1})) == Frac(qint(2), QDen())
    assert (third - third).is_zero()
    assert third * Frac(qint(3), QDen()) == Frac(Laurent.const(1), QDen())


@given(laurents, laurents, generic_q)
@settings(max_examples=40)
def test_frac_evaluation_matches_quotient(a, b, q):
    ctx = NumericContext(q)
    x = Frac(a, QDen({3: 1})) + Frac(b, QDen({2: 1, 0: 1}))
    expected = eval_numeric(a, ctx) / ctx.q_integer(3) + eval_numeric(b, ctx) / (
        ctx.q_integer(2) * (ctx.q - 1 / ctx.q)
    )
    got = x.evaluate(ctx)
    assert abs(got - expected) <= 1e-8 * max(1.0, abs(expected))


def test_frac_at_q_one():
    assert substitute_q_one(qseries.alpha(3)) == Fraction(1, 7)


def test_non_generic_q_reports_index():
    with pytest.raises(NonGenericQ) as info:
        NumericContext(cmath.exp(1j * cmath.pi / 3)).require_generic(4)
    assert info.value.index == 3
    with pytest.raises(NonGenericQ):
        QDen({3: 1}).evaluate(NumericContext(cmath.exp(1j * cmath.pi / 3)))


def test_context_validation():
    with pytest.raises(ValueError):
        NumericContext(0)
    with pytest.raises(ValueError):
        NumericContext(1.2, tol_abs=-1)
