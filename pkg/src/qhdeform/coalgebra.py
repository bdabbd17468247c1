"""Tensor products of representations and the three coproducts.

Kronecker convention: ``A.kron(B)`` lets the left factor vary slowest, so the
basis of V_L (x) V_R is e_i (x) e_k at index i * dim_R + k.  All identities
below are independent of this choice but the matrices are not.
"""
from __future__ import annotations

from dataclasses import dataclass

from .deformmap import (
    DeformedSet,
    _classical_series,
    _report,
    build_deformed,
    jordanian_relations,
    verify_hx_commutator,
    verify_hy_commutator,
    verify_main_commutator,
)
from .repcore import (
    GeneratorSet,
    RepSpec,
    RingMatrix,
    build_sl2_rep,
    build_uq_rep,
    nilpotency_index,
    verify_uq_relations,
)
from .reports import VerificationReport
from .scalarring import NumericContext

__all__ = [
    "TensorRep",
    "coproduct_uq",
    "flip",
    "induced_coproduct_qh",
    "uq_coproduct_checks",
    "induced_coproduct_checks",
    "jordanian_coproduct_check",
    "cocommutativity_check",
]


@dataclass(frozen=True)
class TensorRep:
    left: RepSpec
    right: RepSpec

    @property
    def dim(self) -> int:
        return self.left.dim * self.right.dim

    @property
    def label(self) -> str:
        return f"{self.left.two_j}x{self.right.two_j}"


def _same_ring(a: GeneratorSet, b: GeneratorSet):
    if a.exact != b.exact or a.ring.classical != b.ring.classical:
        raise ValueError("generator sets live over different scalar rings")
    if not a.exact and (a.ring.ctx.q, a.ring.ctx.h) != (b.ring.ctx.q, b.ring.ctx.h):
        raise ValueError("numeric generator sets use different (q, h)")


def coproduct_uq(gen_l: GeneratorSet, gen_r: GeneratorSet) -> GeneratorSet:
    """J+- -> J+- (x) q^J0 + q^-J0 (x) J+-, J0 -> J0 (x) 1 + 1 (x) J0."""
    _same_ring(gen_l, gen_r)
    jp = gen_l.jp.kron(gen_r.qj0_pos) + gen_l.qj0_neg.kron(gen_r.jp)
    jm = gen_l.jm.kron(gen_r.qj0_pos) + gen_l.qj0_neg.kron(gen_r.jm)
    two_m = tuple(a + b for a in gen_l.two_m for b in gen_r.two_m)
    return GeneratorSet(jp, jm, two_m, gen_l.ring, None)


def flip(m: RingMatrix, dim_l: int, dim_r: int) -> RingMatrix:
    """Conjugate by the swap V_L (x) V_R -> V_R (x) V_L."""
    perm = [k * dim_l + i for i in range(dim_l) for k in range(dim_r)]
    # perm[i*dim_r + k] = index of e_k (x) e_i in the swapped space
    out = RingMatrix.zeros(m.dim, m.exact)
    for a, pa in enumerate(perm):
        for b, pb in enumerate(perm):
            out.a[pa, pb] = m.a[a, b]
    return out


def induced_coproduct_qh(tensor_gen: GeneratorSet) -> DeformedSet:
    """The nonlinear map applied to the coproduct images."""
    return build_deformed(tensor_gen)


def _tensor_gens(pair: TensorRep, ctx: NumericContext | None):
    gl = build_uq_rep(pair.left, ctx)
    gr = build_uq_rep(pair.right, ctx)
    return gl, gr, coproduct_uq(gl, gr)


def _tag(reports, pair: TensorRep):
    return [VerificationReport(r.identity, r.mode, r.max_residual, r.passed, r.tag, None,
                               {**r.detail, "pair": pair.label}) for r in reports]


def uq_coproduct_checks(pair: TensorRep, ctx: NumericContext | None = None) -> list:
    """Homomorphism property of the U_q coproduct on V_L (x) V_R."""
    gl, gr, t = _tensor_gens(pair, ctx)
    ring = t.ring
    out = [VerificationReport(r.identity, r.mode, r.max_residual, r.passed, "Eq8", None, r.detail)
           for r in verify_uq_relations(t)]
    qpos = gl.qj0_pos.kron(gr.qj0_pos)
    out.append(_report(ring, "q^J0 (x) q^J0 = q^(Delta J0)", "Eq8", qpos, t.qj0_pos, None))
    j0 = gl.j0.kron(gr.identity) + gl.identity.kron(gr.j0)
    out.append(_report(ring, "Delta J0 = J0 (x) 1 + 1 (x) J0", "Eq8", j0, t.j0, None))
    top = pair.left.dim + pair.right.dim - 1
    zero = RingMatrix.zeros(t.dim, t.exact)
    out.append(_report(ring, f"(Delta J+)^{top} = 0", "Eq8", t.jp ** top, zero, None))
    idx = nilpotency_index(t.jp)
    out.append(VerificationReport("nilpotency index of Delta J+", ring.mode, 0.0, idx <= top, "Eq8",
                                  None, {"index": idx}))
    return _tag(out, pair)


def induced_coproduct_checks(pair: TensorRep, ctx: NumericContext | None = None) -> list:
    """The (q,h) relations for the map applied to Delta J+-, Delta J0."""
    _, _, t = _tensor_gens(pair, ctx)
    d = induced_coproduct_qh(t)
    out = [verify_main_commutator(d), verify_hx_commutator(d), verify_hy_commutator(d)]
    out.append(_report(t.ring, "Delta H = Delta J0", "Eq54", d.hhat, t.j0, None))
    return _tag(out, pair)


def jordanian_coproduct_check(two_j_l: int, two_j_r: int) -> list:
    """X (x) 1 + 1 (x) X, Y (x) e^hX + e^-hX (x) Y, H likewise: U_h relations over Q[h]."""
    pair = TensorRep(RepSpec(two_j_l), RepSpec(two_j_r))
    dl = build_deformed(build_sl2_rep(two_j_l))
    dr = build_deformed(build_sl2_rep(two_j_r))
    gl, gr = dl.source, dr.source
    ep_r = _classical_series(dr.xhat, gr, "exp")
    em_l = _classical_series(dl.xhat, gl, "exp_neg")
    x = dl.xhat.kron(gr.identity) + gl.identity.kron(dr.xhat)
    y = dl.yhat.kron(ep_r) + em_l.kron(dr.yhat)
    hm = dl.hhat.kron(ep_r) + em_l.kron(dr.hhat)
    two_m = tuple(a + b for a in gl.two_m for b in gr.two_m)
    t = GeneratorSet(x, y, two_m, gl.ring, None)
    out = jordanian_relations(x, y, hm, t, None, " on V(x)V")
    out = [VerificationReport(r.identity, r.mode, r.max_residual, r.passed, r.tag.replace("Eq", "Eq55-57/Eq"),
                              None, r.detail) for r in out]
    return _tag(out, pair)


def cocommutativity_check(pair: TensorRep) -> list:
    """Delta J+ differs from its flip for generic q and agrees with it at q = 1."""
    gl, gr, t = _tensor_gens(pair, None)
    swapped = coproduct_uq(gr, gl).jp
    back = flip(swapped, pair.right.dim, pair.left.dim)
    differs = not (back - t.jp).is_zero()
    at_one = (back.at_q_one() - t.jp.at_q_one()).is_zero()
    ring = t.ring
    return _tag([
        VerificationReport("flip(Delta J+) != Delta J+ for generic q", ring.mode, 0.0, differs,
                           "Eq8-flip", None),
        VerificationReport("flip(Delta J+) = Delta J+ at q = 1", ring.mode, 0.0, at_one,
                           "Eq8-flip", None),
    ], pair)
