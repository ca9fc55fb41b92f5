"""Split-signature conformal geometry on a chart: curvature, tractor and
twistor calculus.

Index conventions follow the projective module (same Riemann/Ricci
contractions).  Spin-sector computations run in a null frame whose Gram
matrix is constant; base spinors are elements of the -1/2 eigenspace of
the grading action on the big spin module, with the Clifford action of a
frame vector realised through its model representative in W0.

Sign bookkeeping, frozen here once: the big spin module satisfies
v.w + w.v = +2 h(v,w).  The geometric metric is g = -(pullback of the
model form), so that on base spinors the frame Clifford action obeys
gamma_A gamma_B + gamma_B gamma_A = -2 g_AB.  With that choice every
slot-level formula below (standard and spin tractor derivatives, splitting
operators, twistor operator, tractor Clifford action) is used exactly as
displayed in the sources of this calculus; the only derived consequence to
remember is that the composition of two tractor Clifford actions gives
T.(T.S) = -h(T,T) S for the slot tractor metric h(T,T) = 2 rho sigma +
g(phi, phi).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .sqrt2 import Sqrt2
from .liealg import build_model
from .spin import build_spin_model

F0 = Fraction(0)
F1 = Fraction(1)
RT2 = Sqrt2(Fraction(0), Fraction(1))


def _sdiff(value, ctx, var):
    """Partial derivative for RatFunc or Sqrt2-over-RatFunc scalars."""
    if isinstance(value, Sqrt2):
        return Sqrt2(_sdiff(value.a, ctx, var), _sdiff(value.b, ctx, var))
    if isinstance(value, (int, Fraction)):
        return ctx.zero
    return value.diff(var)


class MetricPatch:
    """Signature-(n,n) metric on the chart x1..xn, p1..pn."""

    def __init__(self, n, g, ctx, base_point=None):
        self.n = n
        self.m = 2 * n
        self.ctx = ctx
        self.vars = [f"x{i + 1}" for i in range(n)] + [f"p{i + 1}" for i in range(n)]
        for v in self.vars:
            ctx.var(v)
        self.g = [[ctx.coerce(x) for x in row] for row in g]
        if any((self.g[a][b] - self.g[b][a]) for a in range(self.m)
               for b in range(self.m)):
            raise ValueError("metric must be symmetric")
        self.base_point = base_point or self._default_base_point()
        self._ginv = None
        self._christoffel = None
        self._curv = None

    def _default_base_point(self):
        pt = {v: Fraction(0) for v in self.vars}
        for i in range(self.n):
            pt[f"p{i + 1}"] = Fraction(1)
        return pt

    def d(self, f, c):
        return _sdiff(f, self.ctx, self.vars[c])

    @property
    def ginv(self):
        if self._ginv is None:
            self._ginv = la.inv(self.g)
        return self._ginv

    def signature_ok(self):
        """Check signature (n,n) at the base point via Jacobi/leading minors.

        Uses exact LDL^t on the numeric Gram matrix at the base point,
        perturbing the point if a pivot degenerates.
        """
        G = [[x.subs(self.base_point) for x in row] for row in self.g]
        signs = _ldl_signs(G)
        if signs is None:
            return False
        return signs.count(1) == self.n and signs.count(-1) == self.n

    @property
    def christoffel(self):
        if self._christoffel is None:
            m = self.m
            gi = self.ginv
            dg = [[[self.d(self.g[a][b], c) for c in range(m)]
                   for b in range(m)] for a in range(m)]
            ch = [[[None] * m for _ in range(m)] for _ in range(m)]
            for a in range(m):
                for b in range(m):
                    for c in range(b, m):
                        v = None
                        for p in range(m):
                            t = gi[a][p] * (dg[p][c][b] + dg[p][b][c] - dg[b][c][p])
                            v = t if v is None else v + t
                        v = v / 2
                        ch[a][b][c] = v
                        ch[a][c][b] = v
            self._christoffel = ch
        return self._christoffel

    def curvature(self):
        if self._curv is None:
            self._curv = ConfCurvature(self)
        return self._curv

    def covd_covector(self, phi, c):
        """D_c phi_a for a covector of chart functions."""
        ch = self.christoffel
        return [self.d(phi[a], c)
                - sum((ch[q][c][a] * phi[q] for q in range(self.m)), self.ctx.zero)
                for a in range(self.m)]

    def rescale(self, omega2):
        """Conformally related metric omega2 * g (omega2 a chart function)."""
        w = self.ctx.coerce(omega2)
        return MetricPatch(self.n, [[w * x for x in row] for row in self.g],
                           self.ctx, self.base_point)


def _ldl_signs(G):
    """Pivot signs of a symmetric rational matrix (None if degenerate)."""
    m = len(G)
    a = [[Fraction(x) for x in row] for row in G]
    signs = []
    for k in range(m):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, m) if a[k][j] != 0), None)
            if j is None:
                return None
            # add row/column j into k (symmetric, fixes the pivot over Q)
            for c in range(k, m):
                a[k][c] += a[j][c]
            for r in range(k, m):
                a[r][k] += a[r][j]
            if a[k][k] == 0:
                for c in range(k, m):
                    a[k][c] -= 2 * a[j][c]
                for r in range(k, m):
                    a[r][k] -= 2 * a[r][j]
            if a[k][k] == 0:
                return None
        piv = a[k][k]
        signs.append(1 if piv > 0 else -1)
        for i in range(k + 1, m):
            for j2 in range(k + 1, m):
                a[i][j2] -= a[i][k] * a[k][j2] / piv
    return signs


class ConfCurvature:
    """Riemann, Ricci, scalar, Schouten, Weyl and Cotton of one metric."""

    def __init__(self, mp):
        m = mp.m
        ch = mp.christoffel
        d = mp.d
        zero = mp.ctx.zero
        R = [[[[zero] * m for _ in range(m)] for _ in range(m)] for _ in range(m)]
        for c1 in range(m):
            for c2 in range(c1 + 1, m):
                for a in range(m):
                    for p in range(m):
                        v = d(ch[a][c2][p], c1) - d(ch[a][c1][p], c2)
                        for q in range(m):
                            v = v + ch[a][c1][q] * ch[q][c2][p] \
                                  - ch[a][c2][q] * ch[q][c1][p]
                        R[c1][c2][a][p] = v
                        R[c2][c1][a][p] = -v
        self.R = R
        self.Ric = [[sum((R[p][a][p][b] for p in range(m)), zero)
                     for b in range(m)] for a in range(m)]
        gi = mp.ginv
        self.Sc = sum((gi[a][b] * self.Ric[a][b]
                       for a in range(m) for b in range(m)), zero)
        self.P = [[(self.Ric[a][b] - self.Sc / (2 * (m - 1)) * mp.g[a][b])
                   / (m - 2) for b in range(m)] for a in range(m)]
        self.J = sum((gi[a][b] * self.P[a][b]
                      for a in range(m) for b in range(m)), zero)
        Pup = [[sum((gi[c][q] * self.P[b][q] for q in range(m)), zero)
                for c in range(m)] for b in range(m)]
        C = [[[[zero] * m for _ in range(m)] for _ in range(m)] for _ in range(m)]
        for a in range(m):
            for b in range(a + 1, m):
                for c in range(m):
                    for dd in range(m):
                        v = R[a][b][c][dd]
                        if c == a:
                            v = v - self.P[b][dd]
                        if c == b:
                            v = v + self.P[a][dd]
                        v = v + mp.g[dd][a] * Pup[b][c] - mp.g[dd][b] * Pup[a][c]
                        C[a][b][c][dd] = v
                        C[b][a][c][dd] = -v
        self.C = C
        covP = [[mp.covd_covector([self.P[b][c] for c in range(m)], a)
                 for b in range(m)] for a in range(m)]
        self.Y = [[[covP[a][b][c] - covP[b][a][c] for c in range(m)]
                   for b in range(m)] for a in range(m)]
        self.m = m
        self.mp = mp

    def weyl_is_zero(self):
        return all(x.is_zero() for r in self.C for s in r for t in s for x in t)

    def weyl_trace_checks(self):
        m = self.m
        gi = self.mp.ginv
        zero = self.mp.ctx.zero
        t1 = all(sum((self.C[a][b][a][dd] for a in range(m)), zero).is_zero()
                 for b in range(m) for dd in range(m))
        t2 = all(sum((gi[b][dd] * self.C[a][b][c][dd]
                      for b in range(m) for dd in range(m)), zero).is_zero()
                 for a in range(m) for c in range(m))
        return t1 and t2


# ---------------------------------------------------------------------------
# Null frames and the spin sector
# ---------------------------------------------------------------------------

class NullFrame:
    """A frame with constant Gram matrix, tied to model vectors in W0.

    frame[mu][A] are the components of the A-th frame vector; the model
    vectors w_A realise the same Gram through the model form h via
    g(xi_A, xi_B) = -h(w_A, w_B), making the fibrewise Clifford action of
    frame vectors a constant matrix.
    """

    def __init__(self, mp, frame, model_vectors):
        self.mp = mp
        self.m = mp.m
        self.model = build_model(mp.n)
        self.spin = build_spin_model(self.model)
        self.frame = frame
        self.model_vectors = model_vectors
        h = self.model.h
        self.model_gram = [[la.sum_prod(la.mat_vec(h, a), b) for b in model_vectors]
                           for a in model_vectors]
        self.gram = [[-x for x in row] for row in self.model_gram]
        for a in range(self.m):
            for b in range(self.m):
                val = sum((mp.g[mu][nu] * frame[mu][a] * frame[nu][b]
                           for mu in range(self.m) for nu in range(self.m)),
                          mp.ctx.zero)
                if not (val - self.gram[a][b]).is_zero():
                    raise ValueError("frame Gram does not match the model Gram")
        self.coframe = la.inv(frame)
        self.gram_inv = la.qinv(self.gram)
        self.model_gram_inv = la.qinv(self.model_gram)
        # constant Clifford matrices per frame index, on the -1/2 eigenspace
        self.gamma = [self.spin.base_clifford_mat(w) for w in model_vectors]
        self.dim_base = len(self.gamma[0])
        # spin representation of the frame-index so-matrices
        self._dlam_pieces = {}
        for b in range(self.m):
            dual = [self.model_gram_inv[b][c] for c in range(self.m)]
            cb_dual = None
            for c, x in enumerate(dual):
                if x == 0:
                    continue
                t = la.mat_scale(x, self.gamma[c])
                cb_dual = t if cb_dual is None else la.mat_add(cb_dual, t)
            for c in range(self.m):
                comm = la.mat_sub(la.mat_mul(self.gamma[c], cb_dual),
                                  la.mat_mul(cb_dual, self.gamma[c]))
                self._dlam_pieces[(c, b)] = la.mat_scale(Fraction(1, 8), comm)
        self._conn = None

    def base_clifford_cov(self, cov_frame_components):
        """Clifford action of the g-raised covector (frame components)."""
        mats = []
        for a in range(self.m):
            coef = None
            for b in range(self.m):
                t = self.gram_inv[a][b] * cov_frame_components[b]
                coef = t if coef is None else coef + t
            mats.append((coef, self.gamma[a]))
        return mats

    def apply_gamma_lincomb(self, coef_mats, psi):
        out = None
        for coef, mat in coef_mats:
            if la._is_zero(coef):
                continue
            t = [coef * x for x in la.mat_vec(mat, psi)]
            out = t if out is None else [u + v for u, v in zip(out, t)]
        return out if out is not None else [self.mp.ctx.zero] * self.dim_base

    def frame_vector_apply(self, a, f):
        """Directional derivative along the a-th frame vector."""
        return sum((self.frame[mu][a] * self.mp.d(f, mu) for mu in range(self.m)),
                   self.mp.ctx.zero)

    @property
    def connection(self):
        """Frame connection coefficient matrices M_A with (M_A)^B_C."""
        if self._conn is None:
            ch = self.mp.christoffel
            m = self.m
            conn = []
            for a in range(m):
                cols = []
                for c in range(m):
                    # D_(xi_a) xi_c in coordinates
                    vec = []
                    for nu in range(m):
                        v = sum((self.frame[mu][a] * self.mp.d(self.frame[nu][c], mu)
                                 for mu in range(m)), self.mp.ctx.zero)
                        v = v + sum((self.frame[mu][a] * ch[nu][mu][rho]
                                     * self.frame[rho][c]
                                     for mu in range(m) for rho in range(m)),
                                    self.mp.ctx.zero)
                        vec.append(v)
                    cols.append(la.mat_vec(self.coframe, vec))
                conn.append(la.transpose(cols))
            self._conn = conn
        return self._conn

    def dlam(self, M):
        """Base spin action of a frame-index so-matrix."""
        out = None
        for (c, b), piece in self._dlam_pieces.items():
            coef = M[c][b]
            if la._is_zero(coef):
                continue
            t = [[coef * x for x in row] for row in piece]
            out = t if out is None else la.mat_add(out, t)
        if out is None:
            return [[self.mp.ctx.zero] * self.dim_base for _ in range(self.dim_base)]
        return out

    def spin_derivative(self, a, psi):
        """Levi-Civita spinor derivative along the a-th frame direction."""
        d_dir = [self.frame_vector_apply(a, x) if not isinstance(x, Sqrt2)
                 else Sqrt2(self.frame_vector_apply(a, x.a),
                            self.frame_vector_apply(a, x.b)) for x in psi]
        rot = self.dlam(self.connection[a])
        corr = la.mat_vec(rot, psi)
        return [u + v for u, v in zip(d_dir, corr)]

    def dirac(self, psi):
        """gamma^p D_p psi with g-raising."""
        out = None
        for a in range(self.m):
            da = self.spin_derivative(a, psi)
            for b in range(self.m):
                coef = self.gram_inv[a][b]
                if coef == 0:
                    continue
                t = [coef * x for x in la.mat_vec(self.gamma[b], da)]
                out = t if out is None else [u + v for u, v in zip(out, t)]
        return out

    def schouten_frame(self):
        P = self.mp.curvature().P
        m = self.m
        return [[sum((P[mu][nu] * self.frame[mu][a] * self.frame[nu][b]
                      for mu in range(m) for nu in range(m)), self.mp.ctx.zero)
                 for b in range(m)] for a in range(m)]


def standard_model_vectors(model):
    """Model null 2n-frame in W0 with h-Gram [[0, I], [I, 0]]."""
    n = model.n
    k = n + 1
    N = model.N

    def unit(i):
        return [F1 if a == i else F0 for a in range(N)]

    a_vecs = [unit(i) for i in range(1, n)]  # u_2 .. u_n
    ell = [x - y for x, y in zip(unit(n), unit(k))]  # u_(n+1) - w_1
    a_vecs.append(ell)
    b_vecs = [unit(k + i) for i in range(1, n)]  # w_2 .. w_n
    last = [(x - y) / 2 for x, y in zip(unit(2 * k - 1), unit(0))]  # (w_(n+1)-u_1)/2
    b_vecs.append(last)
    return a_vecs + b_vecs


def flat_pairing_metric(n, ctx):
    """g = sum_a (dx^a dp_a + dp_a dx^a) on the chart."""
    m = 2 * n
    g = [[ctx.zero for _ in range(m)] for _ in range(m)]
    for i in range(n):
        g[i][n + i] = ctx.one
        g[n + i][i] = ctx.one
    return MetricPatch(n, g, ctx)


def flat_null_frame(mp):
    """Coordinate null frame for the flat pairing metric."""
    model = build_model(mp.n)
    mv = standard_model_vectors(model)
    # geometric Gram of the coordinate frame is +[[0,I],[I,0]]; the model
    # realisation needs h-Gram equal to its negative, so flip the B-block
    mv = mv[: mp.n] + [[-x for x in w] for w in mv[mp.n:]]
    frame = [[mp.ctx.one if i == j else mp.ctx.zero for j in range(mp.m)]
             for i in range(mp.m)]
    return NullFrame(mp, frame, mv)


# ---------------------------------------------------------------------------
# Standard tractor calculus (coordinate slots)
# ---------------------------------------------------------------------------

def std_tractor_derivative(mp, field):
    """(rho, phi_a, sigma) -> list over directions of slot triples."""
    rho, phi, sigma = field
    m = mp.m
    P = mp.curvature().P
    gi = mp.ginv
    out = []
    for c in range(m):
        drho = mp.d(rho, c) - sum((P[c][a] * gi[a][b] * phi[b]
                                   for a in range(m) for b in range(m)),
                                  mp.ctx.zero)
        dphi = [mp.covd_covector(phi, c)[a] + sigma * P[c][a] + rho * mp.g[c][a]
                for a in range(m)]
        dsig = mp.d(sigma, c) - phi[c]
        out.append((drho, dphi, dsig))
    return out


def tractor_metric(mp, t1, t2):
    rho1, phi1, sig1 = t1
    rho2, phi2, sig2 = t2
    gi = mp.ginv
    m = mp.m
    return rho1 * sig2 + sig1 * rho2 + sum(
        (gi[a][b] * phi1[a] * phi2[b] for a in range(m) for b in range(m)),
        mp.ctx.zero)


def einstein_split(mp, sigma):
    """L0 of the standard tractor bundle: ((Delta - J) sigma / m, D sigma, sigma)."""
    m = mp.m
    J = mp.curvature().J
    dsig = [mp.d(sigma, a) for a in range(m)]
    hess = [mp.covd_covector(dsig, c) for c in range(m)]
    lap = -sum((mp.ginv[a][b] * hess[a][b] for a in range(m) for b in range(m)),
               mp.ctx.zero)
    rho = (lap - J * sigma) / m
    return (rho, dsig, sigma)


def einstein_bgg(mp, sigma):
    """Theta0 sigma = trace-free part of (D_a D_b sigma + P_ab sigma)."""
    m = mp.m
    cur = mp.curvature()
    dsig = [mp.d(sigma, a) for a in range(m)]
    hess = [mp.covd_covector(dsig, c) for c in range(m)]
    full = [[hess[a][b] + cur.P[a][b] * sigma for b in range(m)] for a in range(m)]
    tr = sum((mp.ginv[a][b] * full[a][b] for a in range(m) for b in range(m)),
             mp.ctx.zero)
    return [[full[a][b] - tr / m * mp.g[a][b] for b in range(m)] for a in range(m)]


# ---------------------------------------------------------------------------
# Spin tractor calculus (frame slots)
# ---------------------------------------------------------------------------

@dataclass
class SpinTractorField:
    """Slot pair (tau, chi) of base spinor fields; weights are tags only."""
    tau: list
    chi: list
    weights: tuple = (Fraction(-1, 2), Fraction(1, 2))


def spin_tractor_derivative(nf, fld):
    """Per frame direction: (D_c tau + P_cp gamma^p chi / rt2,
                             D_c chi + gamma_c tau / rt2)."""
    P = nf.schouten_frame()
    out = []
    inv_rt2 = Sqrt2(Fraction(0), Fraction(1, 2))  # 1/rt2 = rt2/2
    for a in range(nf.m):
        dtau = nf.spin_derivative(a, fld.tau)
        pgam = nf.apply_gamma_lincomb(nf.base_clifford_cov(P[a]), fld.chi)
        slot1 = [u + inv_rt2 * v for u, v in zip(dtau, pgam)]
        dchi = nf.spin_derivative(a, fld.chi)
        gtau = la.mat_vec(nf.gamma[a], fld.tau)
        slot2 = [u + inv_rt2 * v for u, v in zip(dchi, gtau)]
        out.append(SpinTractorField(slot1, slot2))
    return out


def twistor_operator(nf, chi):
    """Theta0 chi = D chi + gamma D-slash chi / m, plus Dirac and L0."""
    pars = {nf.spin.base_parity(i) for i, x in enumerate(chi)
            if not la._is_zero(x)}
    if len(pars) > 1:
        raise ValueError("twistor operator expects homogeneous parity")
    m = nf.m
    dirac = nf.dirac(chi)
    theta = []
    for a in range(nf.m):
        da = nf.spin_derivative(a, chi)
        corr = la.mat_vec(nf.gamma[a], dirac)
        theta.append([u + Fraction(1, m) * v for u, v in zip(da, corr)])
    inv = Sqrt2(Fraction(0), Fraction(1, 2)) / Fraction(nf.mp.n)  # 1/(rt2 n)
    tau = [inv * x for x in dirac]
    return theta, dirac, SpinTractorField(tau, list(chi))


def gamma_trace(nf, theta):
    """gamma^c theta_c; vanishes identically for twistor operator output."""
    out = None
    for a in range(nf.m):
        for b in range(nf.m):
            coef = nf.gram_inv[a][b]
            if coef == 0:
                continue
            t = [coef * x for x in la.mat_vec(nf.gamma[b], theta[a])]
            out = t if out is None else [u + v for u, v in zip(out, t)]
    return out


def tractor_clifford(nf, std_slots, spin_fld):
    """(rho, phi_a, sigma) . (tau, chi) per the slot display.

    phi is given in frame covector components.
    """
    rho, phi, sigma = std_slots
    rt2 = RT2
    gpsi = nf.apply_gamma_lincomb(nf.base_clifford_cov(phi), spin_fld.tau)
    top = [rt2 * (rho * x) - y for x, y in zip(spin_fld.chi, gpsi)]
    gchi = nf.apply_gamma_lincomb(nf.base_clifford_cov(phi), spin_fld.chi)
    bot = [x - rt2 * (sigma * y) for x, y in zip(gchi, spin_fld.tau)]
    return SpinTractorField(top, bot)
