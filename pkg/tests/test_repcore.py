import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qhdeform import qseries
from qhdeform.errors import NonGenericQ, NotNilpotent
from qhdeform.repcore import (
    ExactRing,
    GeneratorSet,
    RepSpec,
    RingMatrix,
    basis_similarity,
    build_sl2_rep,
    build_uq_rep,
    commutator,
    nilpotency_index,
    nilpotent_series_eval,
    power_action_check,
    verify_conjugation,
    verify_power_identity,
    verify_uq_relations,
)
from qhdeform.scalarring import HPoly, Laurent, NumericContext

from strategies import small_two_j

qint = qseries.q_integer
CTX = NumericContext(1.3 + 0.35j, 0.4 - 0.2j)


def _scalar(x):
    return HPoly.const(x)


def test_spin_half_polynomial_basis():
    g = build_uq_rep(RepSpec(1))
    assert g.jp == RingMatrix.from_rows([[0, 1], [0, 0]], True)
    assert g.jm == RingMatrix.from_rows([[0, 0], [1, 0]], True)
    assert commutator(g.jp, g.jm) == RingMatrix.diag([1, -1], True)


def test_spin_one_lowering_entries():
    g = build_uq_rep(RepSpec(2))
    assert g.jm.a[1, 0] == _scalar(qint(2))
    assert g.jm.a[2, 1] == _scalar(qint(2))


def test_symmetric_basis_classical_spin_half():
    g = build_uq_rep(RepSpec(1, "symmetric"), NumericContext(1.0))
    np.testing.assert_allclose(g.jp.to_complex(), [[0, 1], [0, 0]])
    np.testing.assert_allclose(g.jm.to_complex(), [[0, 0], [1, 0]])


def test_symmetric_basis_requires_context():
    with pytest.raises(ValueError):
        build_uq_rep(RepSpec(2, "symmetric"))
    with pytest.raises(ValueError):
        RepSpec(-1)
    with pytest.raises(ValueError):
        RepSpec(2, "weird")


def test_real_symmetric_basis_rejects_negative_entries():
    q = cmath.exp(0.3j) * 1.5
    with pytest.raises(NonGenericQ):
        build_uq_rep(RepSpec(3, "symmetric"), NumericContext(q), real=True)


def test_non_generic_numeric_q():
    with pytest.raises(NonGenericQ) as info:
        build_uq_rep(RepSpec(4), NumericContext(cmath.exp(1j * cmath.pi / 4)))
    assert info.value.index == 4


@pytest.mark.parametrize("two_j", range(0, 9))
def test_uq_relations_exact(two_j):
    g = build_uq_rep(RepSpec(two_j))
    reports = verify_uq_relations(g)
    assert all(r.passed and r.max_residual == 0 for r in reports)
    assert g.jp.is_strictly_upper()
    assert (g.qj0_pos @ g.qj0_neg) == g.identity


@pytest.mark.parametrize("two_j", range(1, 9))
def test_nilpotency_index_is_dim(two_j):
    g = build_uq_rep(RepSpec(two_j))
    assert nilpotency_index(g.jp) == g.dim
    assert nilpotency_index(build_uq_rep(RepSpec(two_j), CTX).jp) == g.dim


@pytest.mark.parametrize("two_j", range(1, 7))
def test_power_identity_exact(two_j):
    g = build_uq_rep(RepSpec(two_j))
    for p in range(1, g.dim + 1):
        assert verify_power_identity(g, p).passed


@pytest.mark.parametrize("two_j", range(1, 7))
def test_conjugation_exact(two_j):
    assert all(r.passed for r in verify_conjugation(build_uq_rep(RepSpec(two_j))))


class _WrongBracket(ExactRing):
    def qint(self, k):
        return super().qint(k) + (HPoly.const(1) if k == 2 else 0)


def test_power_identity_detects_a_wrong_bracket():
    g = build_uq_rep(RepSpec(3))
    bad = GeneratorSet(g.jp, g.jm, g.two_m, _WrongBracket(), g.spec)
    assert not verify_power_identity(bad, 2).passed
    assert verify_power_identity(bad, 3).passed


def test_conjugation_detects_wrong_weight():
    g = build_uq_rep(RepSpec(3))
    twisted = GeneratorSet(g.jp, g.jm, tuple(t + 2 * (i == 0) for i, t in enumerate(g.two_m)), g.ring, g.spec)
    assert not all(r.passed for r in verify_conjugation(twisted))


def test_numeric_relations_and_identities():
    for tj in range(1, 7):
        g = build_uq_rep(RepSpec(tj), CTX)
        reports = verify_uq_relations(g) + verify_conjugation(g)
        reports += [verify_power_identity(g, p) for p in range(1, g.dim + 1)]
        assert all(r.passed for r in reports), [r.line() for r in reports if not r.passed]


def test_classical_rep_relations():
    g = build_sl2_rep(4)
    assert all(r.passed for r in verify_uq_relations(g))


def test_series_examples():
    z = RingMatrix.zeros(3, True)
    out = nilpotent_series_eval([5, 1, 1], z)
    assert out == 5 * RingMatrix.identity(3, True)
    jp = build_uq_rep(RepSpec(1)).jp
    assert nilpotent_series_eval([1] * 5, jp) == RingMatrix.identity(2, True) + jp
    g = build_uq_rep(RepSpec(2))
    ring = g.ring
    a = ring.half_h * g.jp
    sq = nilpotent_series_eval(ring.sqrt_series(2), a @ a)
    assert sq == RingMatrix.identity(3, True) - Fraction(1, 2) * (a @ a)


def test_series_rejects_non_nilpotent():
    with pytest.raises(NotNilpotent):
        nilpotent_series_eval([1, 1], RingMatrix.identity(2, True))
    with pytest.raises(NotNilpotent):
        nilpotency_index(RingMatrix.identity(2, False))


def test_power_action_examples():
    ctx = NumericContext(1.3)
    spec = RepSpec(3, "symmetric")
    assert power_action_check(spec, 0, ctx).passed
    assert power_action_check(spec, 4, ctx).passed
    rep = power_action_check(spec, 2, ctx)
    assert rep.passed and rep.max_residual < 1e-12
    with pytest.raises(ValueError):
        power_action_check(RepSpec(3), 1, ctx)


@pytest.mark.parametrize("two_j", range(1, 7))
def test_basis_similarity(two_j):
    poly = build_uq_rep(RepSpec(two_j), CTX)
    sym = build_uq_rep(RepSpec(two_j, "symmetric"), CTX)
    s = basis_similarity(two_j, CTX).to_complex()
    si = np.linalg.inv(s)
    for a, b in ((poly.jp, sym.jp), (poly.jm, sym.jm)):
        np.testing.assert_allclose(si @ b.to_complex() @ s, a.to_complex(), atol=1e-10)


@given(small_two_j, st.lists(st.sampled_from("+-0"), min_size=1, max_size=6))
@settings(max_examples=40, deadline=None)
def test_word_traces_agree_across_bases(two_j, word):
    poly = build_uq_rep(RepSpec(two_j), CTX)
    sym = build_uq_rep(RepSpec(two_j, "symmetric"), CTX)

    def trace(g):
        m = g.identity
        for letter in word:
            m = m @ {"+": g.jp, "-": g.jm, "0": g.qj0_pos}[letter]
        return complex(np.trace(m.to_complex()))

    a, b = trace(poly), trace(sym)
    assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


def test_kronecker_mixed_product():
    g1 = build_uq_rep(RepSpec(1))
    g2 = build_uq_rep(RepSpec(2))
    a, b, c, d = g1.jp, g2.jm, g1.qj0_pos, g2.jp
    assert a.kron(b) @ c.kron(d) == (a @ c).kron(b @ d)
    i2, i3 = RingMatrix.identity(2, True), RingMatrix.identity(3, True)
    assert i2.kron(i3) == RingMatrix.identity(6, True)
    # left factor slowest
    e = RingMatrix.zeros(2, True)
    e.a[0, 1] = HPoly.const(1)
    big = e.kron(i3)
    assert big.a[0, 3] == HPoly.const(1) and big.a[1, 4] == HPoly.const(1)


def test_ring_matrix_conversions():
    g = build_uq_rep(RepSpec(2))
    num = g.jm.evaluate(CTX)
    np.testing.assert_allclose(num.to_complex(), build_uq_rep(RepSpec(2), CTX).jm.to_complex())
    assert g.jm.at_q_one() == build_sl2_rep(2).jm
    assert g.jm.nonzero_count() == 2
