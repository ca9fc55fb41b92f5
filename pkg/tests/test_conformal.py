"""Conformal calculus: curvature, tractors, twistor operator, spin sector."""

import random
from fractions import Fraction

import pytest

from projconf import linalg as la
from projconf.ansatz import monomials, operator_kernel_dim
from projconf.conformal import (MetricPatch, SpinTractorField, einstein_bgg,
                                einstein_split, flat_null_frame,
                                flat_pairing_metric, gamma_trace,
                                spin_tractor_derivative, std_tractor_derivative,
                                tractor_clifford, tractor_metric,
                                twistor_operator)
from projconf.construction import chart_context
from projconf.sqrt2 import Sqrt2


@pytest.fixture(scope="module")
def flat2():
    ctx = chart_context(2)
    return flat_pairing_metric(2, ctx)


@pytest.fixture(scope="module")
def curved2():
    ctx = chart_context(2)
    g = [[ctx.zero] * 4 for _ in range(4)]
    for i in range(2):
        g[i][2 + i] = ctx.one
        g[2 + i][i] = ctx.one
    g[0][0] = ctx.parse("x1*p1")
    g[1][1] = ctx.parse("x2^2 + 1")
    g[0][1] = ctx.parse("x2")
    g[1][0] = g[0][1]
    return MetricPatch(2, g, ctx)


def test_flat_curvature_zero(flat2):
    cur = flat2.curvature()
    assert all(x.is_zero() for a in cur.R for b in a for c in b for x in c)
    assert flat2.signature_ok()


def test_odd_dimension_rejected():
    ctx = chart_context(2)
    with pytest.raises(Exception):
        MetricPatch(2, [[ctx.one] * 3 for _ in range(3)], ctx)


def test_metric_symmetry_enforced():
    ctx = chart_context(2)
    g = [[ctx.zero] * 4 for _ in range(4)]
    g[0][1] = ctx.one
    with pytest.raises(ValueError):
        MetricPatch(2, g, ctx)


def test_ricci_symmetric_and_traces(curved2):
    cur = curved2.curvature()
    m = 4
    assert curved2.signature_ok()
    assert all((cur.Ric[a][b] - cur.Ric[b][a]).is_zero()
               for a in range(m) for b in range(m))
    assert cur.weyl_trace_checks()
    assert (cur.J - cur.Sc / (2 * (m - 1))).is_zero()


def test_weyl_conformal_invariance(curved2):
    ctx = curved2.ctx
    om2 = ctx.parse("1 + x1^2")
    resc = curved2.rescale(om2)
    c1, c2 = curved2.curvature(), resc.curvature()
    m = 4
    assert all((c1.C[a][b][c][d] - c2.C[a][b][c][d]).is_zero()
               for a in range(m) for b in range(m)
               for c in range(m) for d in range(m))


def test_levi_civita_metricity(curved2):
    # D g = 0, identically
    m = curved2.m
    ch = curved2.christoffel
    for c in range(m):
        for a in range(m):
            for b in range(m):
                v = curved2.d(curved2.g[a][b], c)
                for q in range(m):
                    v = v - ch[q][c][a] * curved2.g[q][b] \
                          - ch[q][c][b] * curved2.g[a][q]
                assert v.is_zero()


def test_std_tractor_metricity(curved2):
    ctx = curved2.ctx
    t1 = (ctx.parse("x1"), [ctx.parse("p1"), ctx.one, ctx.zero,
                            ctx.parse("x2")], ctx.parse("x2*p2"))
    t2 = (ctx.parse("p2"), [ctx.zero, ctx.parse("x1*x2"), ctx.one, ctx.one],
          ctx.parse("x1 + p1"))
    d1 = std_tractor_derivative(curved2, t1)
    d2 = std_tractor_derivative(curved2, t2)
    pair = tractor_metric(curved2, t1, t2)
    for c in range(4):
        lhs = pair.diff(curved2.vars[c])
        rhs = tractor_metric(curved2, d1[c], t2) + tractor_metric(curved2, t1, d2[c])
        assert (lhs - rhs).is_zero()


def test_split_bottom_slot_vanishes(curved2):
    ctx = curved2.ctx
    sig = ctx.parse("x1*p2 + x2")
    L0 = einstein_split(curved2, sig)
    dL = std_tractor_derivative(curved2, L0)
    assert all(dL[c][2].is_zero() for c in range(4))


def test_flat_einstein_kernels(flat2):
    ctx = flat2.ctx
    assert all(x.is_zero() for r in einstein_bgg(flat2, ctx.one) for x in r)
    assert all(x.is_zero() for r in einstein_bgg(flat2, ctx.var("x1"))
               for x in r)
    mons = monomials(ctx, 2)
    dim = operator_kernel_dim(
        ctx, mons, lambda s: [x for row in einstein_bgg(flat2, s) for x in row])
    assert dim == 2 * flat2.n + 2  # = 6


def test_flat_trivial_std_derivative(flat2):
    ctx = flat2.ctx
    d = std_tractor_derivative(flat2, (ctx.zero, [ctx.zero] * 4, ctx.one))
    for c in range(4):
        assert d[c][0].is_zero()
        assert all(x.is_zero() for x in d[c][1])


def test_base_clifford_convention(flat2):
    nf = flat_null_frame(flat2)
    for a in range(4):
        for b in range(4):
            anti = la.mat_add(la.mat_mul(nf.gamma[a], nf.gamma[b]),
                              la.mat_mul(nf.gamma[b], nf.gamma[a]))
            target = la.mat_scale(-2 * nf.gram[a][b], la.eye(nf.dim_base))
            assert la.mat_is_zero(la.mat_sub(anti, target))


def test_flat_frame_connection_vanishes(flat2):
    nf = flat_null_frame(flat2)
    for a in range(4):
        assert all(x.is_zero() if hasattr(x, "is_zero") else x == 0
                   for r in nf.connection[a] for x in r)


def test_twistor_operator_flat(flat2):
    ctx = flat2.ctx
    nf = flat_null_frame(flat2)
    chi = [ctx.zero] * nf.dim_base
    chi[0] = ctx.one
    theta, dirac, L0 = twistor_operator(nf, chi)
    assert all(la._is_zero(x) for t in theta for x in t)
    assert all(la._is_zero(x) for x in dirac)


def test_gamma_trace_vanishes_identically(flat2):
    ctx = flat2.ctx
    nf = flat_null_frame(flat2)
    par0 = nf.spin.base_parity(0)
    idxs = [i for i in range(nf.dim_base) if nf.spin.base_parity(i) == par0]
    chi = [ctx.zero] * nf.dim_base
    for k, i in enumerate(idxs):
        chi[i] = ctx.parse(f"x1*p{(k % 2) + 1} + {k + 1}*x2*p2")
    theta, dirac, L0 = twistor_operator(nf, chi)
    gt = gamma_trace(nf, theta)
    assert all(la._is_zero(x) for x in gt)


def test_twistor_mixed_parity_rejected(flat2):
    ctx = flat2.ctx
    nf = flat_null_frame(flat2)
    pars = [nf.spin.base_parity(i) for i in range(nf.dim_base)]
    i_plus = pars.index("+")
    i_minus = pars.index("-")
    chi = [ctx.zero] * nf.dim_base
    chi[i_plus] = ctx.one
    chi[i_minus] = ctx.one
    with pytest.raises(ValueError):
        twistor_operator(nf, chi)


def test_flat_twistor_solution_space(flat2):
    # parallel spinors plus gamma.x spinors: dimension 2 * 2^n
    ctx = flat2.ctx
    nf = flat_null_frame(flat2)
    n = flat2.n
    par_groups = {}
    for i in range(nf.dim_base):
        par_groups.setdefault(nf.spin.base_parity(i), []).append(i)
    total = 0
    mons = monomials(ctx, 1)
    for par, idxs in par_groups.items():
        basis_fields = []
        for i in idxs:
            for mo in mons:
                f = [ctx.zero] * nf.dim_base
                f[i] = mo
                basis_fields.append(f)

        def op(chi):
            theta, _, _ = twistor_operator(nf, chi)
            out = []
            for t in theta:
                for x in t:
                    if isinstance(x, Sqrt2):
                        out.extend([_coerce(ctx, x.a), _coerce(ctx, x.b)])
                    else:
                        out.append(_coerce(ctx, x))
            return out

        total += operator_kernel_dim(ctx, basis_fields, op)
    assert total == 2 * 2 ** n


def _coerce(ctx, x):
    return ctx.coerce(x) if isinstance(x, (int, Fraction)) else x


def test_spin_derivative_leibniz_with_clifford(flat2):
    # nabla(T . S) = (nabla T) . S + T . (nabla S) slot-wise
    ctx = flat2.ctx
    mp = flat2
    nf = flat_null_frame(mp)
    rho, sigma = ctx.parse("x1"), ctx.parse("p2 + 1")
    phi = [ctx.parse("x2"), ctx.zero, ctx.one, ctx.parse("p1")]
    tau = [ctx.zero] * nf.dim_base
    chi = [ctx.zero] * nf.dim_base
    tau[1] = ctx.parse("x1*p1")
    chi[0] = ctx.parse("x2")
    S = SpinTractorField(tau, chi)
    TS = tractor_clifford(nf, (rho, phi, sigma), S)
    dTS = spin_tractor_derivative(nf, TS)
    dS = spin_tractor_derivative(nf, S)
    # coordinate frame: slot derivative of T in frame components
    dT = std_tractor_derivative(mp, (rho, phi, sigma))
    for c in range(4):
        lhs_tau, lhs_chi = dTS[c].tau, dTS[c].chi
        t1 = tractor_clifford(nf, dT[c], S)
        t2 = tractor_clifford(nf, (rho, phi, sigma), dS[c])
        for u, v, w in zip(lhs_tau, t1.tau, t2.tau):
            assert (Sqrt2.of(u) - Sqrt2.of(v) - Sqrt2.of(w)).is_zero()
        for u, v, w in zip(lhs_chi, t1.chi, t2.chi):
            assert (Sqrt2.of(u) - Sqrt2.of(v) - Sqrt2.of(w)).is_zero()


def test_tractor_clifford_displays(flat2):
    ctx = flat2.ctx
    nf = flat_null_frame(flat2)
    tau = [ctx.parse("x1"), ctx.zero, ctx.one, ctx.zero]
    chi = [ctx.zero, ctx.parse("p1"), ctx.zero, ctx.parse("x2")]
    S = SpinTractorField(tau, chi)
    rt2 = Sqrt2(Fraction(0), Fraction(1))
    sigma = ctx.parse("x2*p1")
    out = tractor_clifford(nf, (ctx.zero, [ctx.zero] * 4, sigma), S)
    assert all((Sqrt2.of(x)).is_zero() for x in out.tau)
    assert all((Sqrt2.of(a) + rt2 * (sigma * b)).is_zero()
               for a, b in zip(out.chi, tau))
    rho = ctx.parse("x1 + p2")
    out2 = tractor_clifford(nf, (rho, [ctx.zero] * 4, ctx.zero), S)
    assert all((Sqrt2.of(a) - rt2 * (rho * b)).is_zero()
               for a, b in zip(out2.tau, chi))
    assert all(Sqrt2.of(x).is_zero() for x in out2.chi)


def test_tractor_clifford_composition(flat2):
    # T.(T.S) = -h(T,T) S for the slot tractor metric
    ctx = flat2.ctx
    nf = flat_null_frame(flat2)
    rho, sigma = ctx.parse("x1"), ctx.parse("p2 + 1")
    phi = [ctx.parse("x2"), ctx.zero, ctx.one, ctx.parse("p1")]
    chi = [ctx.parse("x1"), ctx.zero, ctx.parse("p2"), ctx.one]
    tau = [ctx.zero, ctx.one, ctx.zero, ctx.parse("x2*p1")]
    S = SpinTractorField(tau, chi)
    TS = tractor_clifford(nf, (rho, phi, sigma), S)
    TTS = tractor_clifford(nf, (rho, phi, sigma), TS)
    hTT = 2 * rho * sigma + sum(nf.gram_inv[a][b] * phi[a] * phi[b]
                                for a in range(4) for b in range(4))
    for x, y in zip(TTS.tau, S.tau):
        assert (Sqrt2.of(x) + hTT * Sqrt2.of(y)).is_zero()
    for x, y in zip(TTS.chi, S.chi):
        assert (Sqrt2.of(x) + hTT * Sqrt2.of(y)).is_zero()


def test_conformal_covariance_of_einstein_kernel(flat2):
    # sigma in ker Theta0 w.r.t. g maps to a kernel element w.r.t. the
    # rescaled metric after the frozen weight twist
    ctx = flat2.ctx
    omega = ctx.parse("1 + x1*p1")
    resc = flat2.rescale(omega * omega)
    for sig in (ctx.one, ctx.var("x1")):
        twisted = omega * sig
        out = einstein_bgg(resc, twisted)
        assert all(x.is_zero() for r in out for x in r)
