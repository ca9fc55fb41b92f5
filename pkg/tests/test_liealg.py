"""Algebraic model: dimensions, dualities, gradings, memberships."""

import random
from fractions import Fraction

import pytest

from projconf import linalg as la
from projconf.liealg import build_model, include_sl, sl_part


@pytest.fixture(scope="module", params=[2, 3])
def model(request):
    return build_model(request.param)


def test_form_is_split_block(model):
    n, k = model.n, model.n + 1
    for i in range(model.N):
        for j in range(model.N):
            expect = Fraction(1) if abs(i - j) == k else Fraction(0)
            assert model.h[i][j] == expect
    assert model.v_plus_tilde[0] == 1 and model.v_plus_tilde[-1] == 1
    assert sum(1 for x in model.v_plus_tilde if x != 0) == 2
    hv = la.mat_vec(model.h, model.v_plus_tilde)
    assert la.sum_prod(hv, model.v_plus_tilde) == 0


def test_dimensions(model):
    n = model.n
    assert model.dim_g == (n + 1) ** 2 - 1
    assert model.dim_gtilde == (n + 1) * (2 * n + 1)
    assert len(model.ptilde_plus_basis) == 2 * n
    assert len(model.X) == 2 * n
    # q = g cap ptilde has dimension n^2 (block shape: first column along
    # the ray, last row zero off the corner, corner balancing the trace)
    assert len(model.q_basis) == n ** 2
    assert len(model.pprime_basis) == n ** 2 + 1
    assert len(model.p_basis) == n ** 2 + n


def test_all_basis_elements_h_skew(model):
    assert all(model.is_h_skew(m) for m in model.gtilde_basis)
    assert all(model.is_h_skew(m) for m in model.g_basis)


def test_dual_basis_identities(model):
    n = model.n
    for i in range(2 * n):
        for j in range(n):
            expect = Fraction(1) if i == j else Fraction(0)
            assert model.killing_gtilde(model.X[i], model.Z[j]) == expect
        for j in range(2 * n):
            expect = Fraction(1) if i == j else Fraction(0)
            assert model.killing_gtilde(model.X[i], model.Z_tilde[j]) == expect


def test_ztilde_minus_z_in_g_perp(model):
    for j in range(model.n):
        d = la.mat_sub(model.Z_tilde[j], model.Z[j])
        assert model.membership(d, "g_perp")


def test_ztilde_annihilates_fbar_plus_L(model):
    for j in range(model.n):
        for v in model.Fbar + model.L:
            assert all(x == 0 for x in la.mat_vec(model.Z_tilde[j], v))


def test_killing_constants(model):
    n = model.n
    assert model.k_gtilde == 2 * n
    assert model.k_sl == 2 * (n + 1)
    assert model.killing_ratio == Fraction(2 * n, n + 1)


def test_killing_ratio_frozen_n2():
    assert build_model(2).killing_ratio == Fraction(4, 3)


def test_nilpotent_self_pairing(model):
    z = model.ptilde_plus_basis[0]
    assert model.killing_gtilde(z, z) == 0


def test_include_sl_is_homomorphism(model):
    rng = random.Random(5)
    k = model.n + 1
    for _ in range(3):
        a = [[Fraction(rng.randint(-3, 3)) for _ in range(k)] for _ in range(k)]
        b = [[Fraction(rng.randint(-3, 3)) for _ in range(k)] for _ in range(k)]
        tr_a = la.mat_trace(a) / k
        tr_b = la.mat_trace(b) / k
        for i in range(k):
            a[i][i] -= tr_a
            b[i][i] -= tr_b
        lhs = include_sl(la.bracket(a, b))
        rhs = la.bracket(include_sl(a), include_sl(b))
        assert la.mat_is_zero(la.mat_sub(lhs, rhs))
        assert model.is_h_skew(include_sl(a))


def test_include_sl_examples(model):
    k = model.n + 1
    zero = [[Fraction(0)] * k for _ in range(k)]
    assert la.mat_is_zero(include_sl(zero))
    e12 = [[Fraction(0)] * k for _ in range(k)]
    e12[0][1] = Fraction(1)
    m = include_sl(e12)
    assert m[0][1] == 1 and m[k + 1][k] == -1
    with pytest.raises(ValueError):
        eye = la.eye(k)
        include_sl(eye)


def test_q_is_intersection(model):
    # q = g cap ptilde as an equality of solution spaces: the combinations
    # of the sl basis landing in ptilde form exactly the span of q
    rows = []
    v = model.v_plus_tilde
    for b in model.sl_basis:
        image = la.mat_vec(include_sl(b), v)
        row = []
        for i in range(model.N):
            for j in range(i + 1, model.N):
                row.append(image[i] * v[j] - image[j] * v[i])
        rows.append(row)
    ker = la.qnullspace(la.transpose(rows))
    assert len(ker) == len(model.q_basis)
    q_vecs = [la.vec(b) for b in model.q_basis]
    for cv in ker:
        m = la.zeros(model.n + 1)
        for c, b in zip(cv, model.sl_basis):
            if c:
                m = la.mat_add(m, la.mat_scale(c, b))
        assert la.in_span(q_vecs, la.vec(m))


def test_membership_block_shapes(model):
    n, k = model.n, model.n + 1
    # strictly upper element of the ray-stabiliser shape with zero last row: in q
    m = [[Fraction(0)] * k for _ in range(k)]
    m[0][1] = Fraction(2)
    m[1][k - 1] = Fraction(3)
    assert model.membership(m, "q") and model.membership(m, "pprime")
    # nonzero corner entry c independent of a: in p' but not in q
    m2 = [[Fraction(0)] * k for _ in range(k)]
    m2[0][0] = Fraction(1)
    m2[k - 1][k - 1] = Fraction(1)
    m2[1][1] = Fraction(-2)
    assert model.membership(m2, "pprime") and not model.membership(m2, "q")
    # generic element with nonzero lower-left column: not in p
    m3 = [[Fraction(0)] * k for _ in range(k)]
    m3[1][0] = Fraction(1)
    m3[0][1] = Fraction(-1)
    assert not model.membership(m3, "p")
    assert model.membership(m3, "sl")


def test_decompose_gtilde(model):
    rng = random.Random(11)
    # embedded element has only the (E x F)_0 part
    a = model.sl_basis[1]
    g_part, tr_part, l2e, l2f = model.decompose_gtilde(include_sl(a))
    assert la.mat_is_zero(tr_part) and la.mat_is_zero(l2e) and la.mat_is_zero(l2f)
    assert la.mat_is_zero(la.mat_sub(g_part, include_sl(a)))
    # strict upper-right block is pure Lambda^2 E
    k = model.n + 1
    m = la.zeros(model.N)
    m[0][k + 1] = Fraction(1)
    m[1][k] = Fraction(-1)
    parts = model.decompose_gtilde(m)
    assert la.mat_is_zero(parts[0]) and la.mat_is_zero(parts[1])
    assert la.mat_is_zero(parts[3]) and not la.mat_is_zero(parts[2])
    # random element: parts sum back and are pairwise Killing-orthogonal
    coeffs = [Fraction(rng.randint(-3, 3)) for _ in model.gtilde_basis]
    x = model.gtilde_from_coords(coeffs)
    parts = model.decompose_gtilde(x)
    total = parts[0]
    for p in parts[1:]:
        total = la.mat_add(total, p)
    assert la.mat_is_zero(la.mat_sub(total, x))
    # orthogonality: g is orthogonal to g-perp, and the trace part to the
    # wedge parts; Lambda^2 E and Lambda^2 F are dual isotropic pieces and
    # pair nontrivially under the Killing form
    for i in range(4):
        for j in range(i + 1, 4):
            if (i, j) == (2, 3):
                continue
            assert model.killing_gtilde(parts[i], parts[j]) == 0
    assert model.killing_gtilde(parts[2], parts[2]) == 0
    assert model.killing_gtilde(parts[3], parts[3]) == 0


def test_jacobi_spot_checks(model):
    rng = random.Random(3)
    for _ in range(3):
        a, b, c = rng.sample(model.gtilde_basis, 3)
        acc = la.bracket(a, la.bracket(b, c))
        acc = la.mat_add(acc, la.bracket(b, la.bracket(c, a)))
        acc = la.mat_add(acc, la.bracket(c, la.bracket(a, b)))
        assert la.mat_is_zero(acc)


def test_quotient_iso(model):
    n = model.n
    assert la.qrank(model.quotient_model_vectors) == 2 * n
    # e, f isotropic with one-dimensional intersection spanned by k
    def qf(a, b):
        return la.sum_prod(la.mat_vec(model.quotient_form, b), a)
    for sub in (model.e_class_coords, model.f_class_coords):
        assert all(qf(a, b) == 0 for a in sub for b in sub)
    assert la.in_span(model.e_class_coords, model.k_class_coords)
    assert la.in_span(model.f_class_coords, model.k_class_coords)
    both = la.qnullspace(la.transpose(model.e_class_coords
                                      + model.f_class_coords))
    assert len(both) == 1
    assert qf(model.k_class_coords, model.k_class_coords) == 0


def test_json_dump(model):
    import json
    doc = json.loads(model.to_json())
    assert doc["n"] == model.n
    assert doc["killing_ratio"] == str(model.killing_ratio)
