"""Spin representation: Clifford relations, purity, pairing, involution."""

import random
from fractions import Fraction

import pytest

from projconf import linalg as la
from projconf.liealg import build_model, include_sl
from projconf.spin import build_spin_model
from projconf.sqrt2 import Sqrt2


@pytest.fixture(scope="module", params=[2, 3])
def sm(request):
    return build_spin_model(build_model(request.param))


def _rvec(rng, k):
    return [Fraction(rng.randint(-3, 3)) for _ in range(k)]


def test_dimensions(sm):
    n = sm.n
    assert sm.dim_delta == 2 ** (n + 1)
    assert sum(1 for p in sm.parity if p == "-") == 2 ** n


def test_clifford_relation(sm):
    rng = random.Random(2)
    model = sm.model
    for _ in range(4):
        v, w = _rvec(rng, model.N), _rvec(rng, model.N)
        s = _rvec(rng, sm.dim_delta)
        vw = sm.clifford_act(v, sm.clifford_act(w, s))
        wv = sm.clifford_act(w, sm.clifford_act(v, s))
        hvw = la.sum_prod(la.mat_vec(model.h, v), w)
        assert all(a + b == 2 * hvw * c for a, b, c in zip(vw, wv, s))


def test_isotropic_square(sm):
    model = sm.model
    rng = random.Random(4)
    # null vector: u + w with h(u, w) = 0
    v = [Fraction(0)] * model.N
    v[1] = Fraction(3)
    v[model.n + 1] = Fraction(2)  # u_2 and w_1: h = 0
    s = _rvec(rng, sm.dim_delta)
    assert all(x == 0 for x in sm.clifford_act(v, sm.clifford_act(v, s)))


def test_clifford_parity_flip(sm):
    v = [Fraction(1)] + [Fraction(0)] * (sm.model.N - 1)
    out = sm.clifford_act(v, sm.s_F)
    support = {sm.parity[i] for i, x in enumerate(out) if x != 0}
    assert support == {"+"}


def test_kernels_are_E_and_F(sm):
    n = sm.n
    kF = sm.purity_kernel(sm.s_F)
    kE = sm.purity_kernel(sm.s_E)
    assert len(kF) == n + 1 and len(kE) == n + 1
    for v in kF:
        assert all(v[i] == 0 for i in range(n + 1))       # inside F
    for v in kE:
        assert all(v[n + 1 + i] == 0 for i in range(n + 1))  # inside E
    assert sm.is_pure(sm.s_F) and sm.is_pure(sm.s_E)


def test_fvector_kills_sF(sm):
    v = [Fraction(0)] * sm.model.N
    v[sm.model.N - 1] = Fraction(5)
    assert all(x == 0 for x in sm.clifford_act(v, sm.s_F))


def test_sum_and_generic_spinor_not_pure(sm):
    mixed = [a + b for a, b in zip(sm.s_E, sm.s_F)]
    if sm.n % 2 == 0:
        pars = {sm.parity[i] for i, x in enumerate(mixed) if x != 0}
        assert pars == {"+", "-"}  # mixed parity
    assert len(sm.purity_kernel(mixed)) < sm.n + 1
    rng = random.Random(8)
    generic = _rvec(rng, sm.dim_delta)
    assert len(sm.purity_kernel(generic)) <= sm.n + 1
    with pytest.raises(ValueError):
        sm.purity_kernel([Fraction(0)] * sm.dim_delta)


def test_parity_placement(sm):
    full = tuple(range(sm.n + 1))
    sF_par = sm.parity[sm.index[()]]
    sE_par = sm.parity[sm.index[full]]
    assert sF_par == "-"
    assert sE_par == ("+" if sm.n % 2 == 0 else "-")


def test_spin_rep_defining_property(sm):
    rng = random.Random(6)
    model = sm.model
    for m in rng.sample(model.gtilde_basis, 4):
        x = _rvec(rng, model.N)
        dl = sm.spin_rep(m)
        cx = sm.clifford_mat(x)
        lhs = la.mat_sub(la.mat_mul(dl, cx), la.mat_mul(cx, dl))
        rhs = sm.clifford_mat(la.mat_vec(m, x))
        assert la.mat_is_zero(la.mat_sub(lhs, rhs))


def test_spin_rep_is_homomorphism(sm):
    rng = random.Random(7)
    a, b = rng.sample(sm.model.gtilde_basis, 2)
    lhs = la.mat_sub(la.mat_mul(sm.spin_rep(a), sm.spin_rep(b)),
                     la.mat_mul(sm.spin_rep(b), sm.spin_rep(a)))
    assert la.mat_is_zero(la.mat_sub(lhs, sm.spin_rep(la.bracket(a, b))))


def test_sl_annihilates_invariant_spinors(sm):
    rng = random.Random(9)
    for _ in range(5):
        coeffs = [Fraction(rng.randint(-2, 2)) for _ in sm.model.sl_basis]
        a = la.zeros(sm.n + 1)
        for c, b in zip(coeffs, sm.model.sl_basis):
            a = la.mat_add(a, la.mat_scale(c, b))
        rep = sm.spin_rep(include_sl(a))
        assert all(x == 0 for x in la.mat_vec(rep, sm.s_E))
        assert all(x == 0 for x in la.mat_vec(rep, sm.s_F))


def test_involution_properties(sm):
    model = sm.model
    K = model.K
    assert model.is_h_skew(K)
    assert la.mat_is_zero(la.mat_sub(la.mat_mul(K, K), la.eye(model.N)))
    # h(Kv, w) = -h(v, Kw)
    rng = random.Random(10)
    v, w = _rvec(rng, model.N), _rvec(rng, model.N)
    lhs = la.sum_prod(la.mat_vec(model.h, la.mat_vec(K, v)), w)
    rhs = la.sum_prod(la.mat_vec(model.h, v), la.mat_vec(K, w))
    assert lhs == -rhs
    # K acts by +1 on E and -1 on F
    for i in range(sm.n + 1):
        e = [Fraction(0)] * model.N
        e[i] = Fraction(1)
        assert la.mat_vec(K, e) == e
        f = [Fraction(0)] * model.N
        f[sm.n + 1 + i] = Fraction(1)
        assert la.mat_vec(K, f) == [-x for x in f]
    # the spin action of K preserves the lines of s_E and s_F
    dK = sm.spin_rep(K)
    for s in (sm.s_E, sm.s_F):
        img = la.mat_vec(dK, s)
        nz = next(i for i, x in enumerate(s) if x != 0)
        lam = img[nz] / s[nz]
        assert img == [lam * x for x in s]


def test_pairing_properties(sm):
    assert sm.pairing(sm.s_E, sm.s_F) == 1
    assert sm.invariant_pairing_dim == 2
    # invariance: B(dlam(M) x, y) + B(x, dlam(M) y) = 0
    rng = random.Random(12)
    m = rng.choice(sm.model.gtilde_basis)
    x, y = _rvec(rng, sm.dim_delta), _rvec(rng, sm.dim_delta)
    rep = sm.spin_rep(m)
    assert sm.pairing(la.mat_vec(rep, x), y) + sm.pairing(x, la.mat_vec(rep, y)) == 0
    # non-degeneracy on the component pairing s_E with s_F
    parE = sm.parity[sm.index[tuple(range(sm.n + 1))]]
    idxE = [i for i in range(sm.dim_delta) if sm.parity[i] == parE]
    idxF = [i for i in range(sm.dim_delta) if sm.parity[i] == "-"]
    block = [[sm.pairing_mat[a][b] for b in idxF] for a in idxE]
    assert la.qrank(block) == len(idxF)


def test_grading_eigenspace_split(sm):
    d = sm.dim_delta
    for idx in range(d // 2):
        assert sm.base_parity(idx) in ("+", "-")
    # c(v-~) is an isomorphism from the +1/2 to the -1/2 eigenspace
    cvm = sm.clifford_mat(sm.model.v_minus_tilde)
    mapped = la.mat_mul(sm.pr_minus, la.mat_mul(cvm, sm.emb_plus))
    assert la.qrank(mapped) == d // 2
    # and kills the -1/2 eigenspace
    killed = la.mat_mul(sm.pr_minus, la.mat_mul(cvm, sm.emb_minus))
    assert all(x == 0 for r in killed for x in r)
