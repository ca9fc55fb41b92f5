"""Projective differential geometry on a coordinate chart.

A projective structure is entered through the Christoffel symbols of one
torsion-free representative connection.  Curvature conventions:

    R_(c1 c2)^a_p = d_(c1) G^a_(c2 p) - d_(c2) G^a_(c1 p)
                    + G^a_(c1 q) G^q_(c2 p) - G^a_(c2 q) G^q_(c1 p)
    Ric_(ab)      = R_(pa)^p_b

The Rho/Schouten tensor is the standard torsion-free completion

    P_(ab) = (n Ric_(ab) + Ric_(ba)) / ((n+1)(n-1)),

which reduces to Ric/(n-1) whenever Ric is symmetric (in particular in the
volume-preserving gauge used by the Cartan machinery below) and makes the
Weyl tensor

    C_(c1 c2)^a_p = R + P_(c1 p) d^a_(c2) - P_(c2 p) d^a_(c1)
                      + 2 P_([c1 c2]) d^a_p

projectively invariant for arbitrary (also non-closed) change covectors.
The Cotton tensor is A_(a c1 c2) = 2 D_([c1) P_(c2] a).

The Cartan gauge works in the volume-preserving representative
(G^p_(p a) = 0, always reachable inside the class); `specialize` converts.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from . import linalg as la
from .kostant import Cochain, context
from .liealg import build_model


class ProjectiveStructure:
    """Torsion-free Christoffel symbols on the chart x1..xn."""

    def __init__(self, n, gamma, ctx):
        if n < 2:
            raise ValueError("projective structures need n >= 2")
        self.n = n
        self.ctx = ctx
        self.xvars = [f"x{i + 1}" for i in range(n)]
        for v in self.xvars:
            ctx.var(v)  # raises if the chart lacks base coordinates
        zero = ctx.zero
        self.gamma = [[[zero for _ in range(n)] for _ in range(n)] for _ in range(n)]
        for (a, b, c), val in gamma.items():
            val = ctx.coerce(val)
            if self.gamma[a][b][c] is not zero and self.gamma[a][b][c] != val:
                raise ValueError(f"conflicting values for Gamma^{a}_({b}{c})")
            self.gamma[a][b][c] = val
            self.gamma[a][c][b] = val

    def d(self, f, c):
        return f.diff(self.xvars[c])

    def is_special(self):
        return all(
            sum((self.gamma[p][p][a] for p in range(self.n)), self.ctx.zero).is_zero()
            for a in range(self.n))

    def trace_covector(self):
        n = self.n
        return [sum((self.gamma[p][p][a] for p in range(n)), self.ctx.zero)
                for a in range(n)]

    def proj_change(self, upsilon):
        """Projectively equivalent connection for the covector upsilon."""
        n = self.n
        ups = [self.ctx.coerce(u) for u in upsilon]
        gamma = {}
        for a in range(n):
            for b in range(n):
                for c in range(b, n):
                    v = self.gamma[a][b][c]
                    if a == b:
                        v = v + ups[c]
                    if a == c:
                        v = v + ups[b]
                    gamma[(a, b, c)] = v
        return ProjectiveStructure(n, gamma, self.ctx)

    def specialize(self):
        """Volume-preserving representative of the same projective class."""
        tr = self.trace_covector()
        ups = [t / (-(self.n + 1)) for t in tr]
        return self.proj_change(ups)

    def curvature(self):
        return ProjCurvature(self)


class ProjCurvature:
    """Curvature data R, Ric, P, C, A of one representative connection."""

    def __init__(self, ps):
        n = ps.n
        g = ps.gamma
        d = ps.d
        zero = ps.ctx.zero
        R = [[[[zero] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
        for c1 in range(n):
            for c2 in range(c1 + 1, n):
                for a in range(n):
                    for p in range(n):
                        v = d(g[a][c2][p], c1) - d(g[a][c1][p], c2)
                        for q in range(n):
                            v = v + g[a][c1][q] * g[q][c2][p] \
                                  - g[a][c2][q] * g[q][c1][p]
                        R[c1][c2][a][p] = v
                        R[c2][c1][a][p] = -v
        self.R = R
        self.Ric = [[sum((R[p][a][p][b] for p in range(n)), zero)
                     for b in range(n)] for a in range(n)]
        den = Fraction((n + 1) * (n - 1))
        self.P = [[(n * self.Ric[a][b] + self.Ric[b][a]) / den
                   for b in range(n)] for a in range(n)]
        C = [[[[zero] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
        for c1 in range(n):
            for c2 in range(n):
                skew = self.P[c1][c2] - self.P[c2][c1]
                for a in range(n):
                    for p in range(n):
                        v = R[c1][c2][a][p]
                        if a == c2:
                            v = v + self.P[c1][p]
                        if a == c1:
                            v = v - self.P[c2][p]
                        if a == p:
                            v = v + skew
                        C[c1][c2][a][p] = v
        self.C = C
        # A_(a c1 c2) = D_(c1) P_(c2 a) - D_(c2) P_(c1 a)
        def covd_P(c, b, a):
            v = d(self.P[b][a], c)
            for q in range(n):
                v = v - g[q][c][b] * self.P[q][a] - g[q][c][a] * self.P[b][q]
            return v
        self.A = [[[covd_P(c1, c2, a) - covd_P(c2, c1, a)
                    for c2 in range(n)] for c1 in range(n)] for a in range(n)]
        self.n = n

    def weyl_is_zero(self):
        return all(x.is_zero() for a in self.C for b in a for c in b for x in c)

    def cotton_is_zero(self):
        return all(x.is_zero() for a in self.A for b in a for x in b)


# ---------------------------------------------------------------------------
# Tractor calculus in a fixed volume-preserving gauge
# ---------------------------------------------------------------------------

def _require_special(ps):
    if not ps.is_special():
        raise ValueError("this operation requires the volume-preserving "
                         "representative; call specialize() first")


def tractor_derivative(ps, field, bundle):
    """Slot-wise tractor derivative per the fixed-gauge formulas.

    bundle 'T': field = (rho, sigma^a);  returns per-direction pairs.
    bundle 'T*': field = (phi_a, sigma).
    """
    _require_special(ps)
    n = ps.n
    P = ps.curvature().P
    g = ps.gamma
    d = ps.d
    if bundle == "T":
        rho, sigma = field
        out = []
        for c in range(n):
            drho = d(rho, c) - sum((P[c][p] * sigma[p] for p in range(n)),
                                   ps.ctx.zero)
            dsig = []
            for a in range(n):
                v = d(sigma[a], c) + sum((g[a][c][p] * sigma[p]
                                          for p in range(n)), ps.ctx.zero)
                if a == c:
                    v = v + rho
                dsig.append(v)
            out.append((drho, dsig))
        return out
    if bundle == "T*":
        phi, sigma = field
        out = []
        for c in range(n):
            dphi = []
            for a in range(n):
                v = d(phi[a], c) - sum((g[q][c][a] * phi[q]
                                        for q in range(n)), ps.ctx.zero)
                v = v + P[c][a] * sigma
                dphi.append(v)
            dsig = d(sigma, c) - phi[c]
            out.append((dphi, dsig))
        return out
    raise ValueError("bundle must be 'T' or 'T*'")


def bgg_split(ps, sigma, bundle):
    """BGG splitting operator L0 in the fixed gauge."""
    _require_special(ps)
    n = ps.n
    d = ps.d
    if bundle == "T":
        div = sum((d(sigma[p], p) + sum((ps.gamma[p][p][q] * sigma[q]
                                         for q in range(n)), ps.ctx.zero)
                   for p in range(n)), ps.ctx.zero)
        return (div / (-n), list(sigma))
    if bundle == "T*":
        return ([d(sigma, a) for a in range(n)], sigma)
    raise ValueError("bundle must be 'T' or 'T*'")


def bgg_operator(ps, sigma, bundle):
    """First BGG operator Theta0 in the fixed gauge."""
    _require_special(ps)
    n = ps.n
    d = ps.d
    g = ps.gamma
    if bundle == "T":
        div = sum((d(sigma[p], p) + sum((g[p][p][q] * sigma[q]
                                         for q in range(n)), ps.ctx.zero)
                   for p in range(n)), ps.ctx.zero)
        out = [[d(sigma[a], c) + sum((g[a][c][p] * sigma[p] for p in range(n)),
                                     ps.ctx.zero)
                for a in range(n)] for c in range(n)]
        for c in range(n):
            out[c][c] = out[c][c] - div / n
        return out
    if bundle == "T*":
        P = ps.curvature().P
        out = []
        for a in range(n):
            row = []
            for b in range(n):
                v = d(d(sigma, b), a) - sum((g[q][a][b] * d(sigma, q)
                                             for q in range(n)), ps.ctx.zero)
                row.append(v + sigma * P[a][b])
            out.append(row)
        return out
    raise ValueError("bundle must be 'T' or 'T*'")


def bgg_proj(ps, sigma, bundle):
    """(L0 sigma, Theta0 sigma) as in the module contract."""
    return bgg_split(ps, sigma, bundle), bgg_operator(ps, sigma, bundle)


# ---------------------------------------------------------------------------
# The gauged normal Cartan connection
# ---------------------------------------------------------------------------

class CartanGauge:
    """The normal projective Cartan connection in the chart gauge.

    omega[c] is an sl(n+1)-matrix of chart functions; kappa is the
    curvature function as an arity-2 proj cochain over the frozen basis.
    The grade-0 block of kappa reproduces the Weyl tensor and the grade-+1
    row reproduces minus the Cotton tensor (reading maps below).
    """

    def __init__(self, ps):
        _require_special(ps)
        self.ps = ps
        n = ps.n
        self.model = build_model(n)
        zero = ps.ctx.zero
        curv = ps.curvature()
        self.curv = curv
        omega = []
        for c in range(n):
            m = [[zero for _ in range(n + 1)] for _ in range(n + 1)]
            tr = sum((ps.gamma[p][c][p] for p in range(n)), zero)
            m[0][0] = -tr
            for j in range(n):
                m[0][j + 1] = -curv.P[c][j]
            for i in range(n):
                m[i + 1][0] = ps.ctx.one if i == c else zero
                for j in range(n):
                    m[i + 1][j + 1] = ps.gamma[i][c][j]
            omega.append(m)
        self.omega = omega
        vals = {}
        for c1, c2 in combinations(range(n), 2):
            kmat = _two_form_curvature(ps, omega, c1, c2)
            for i in range(n):
                if not kmat[i + 1][0].is_zero():
                    raise AssertionError("gauged connection has torsion")
            vals[(c1, c2)] = self.model.sl_coords(kmat)
        self.kappa = Cochain(self.model, "proj", 2, vals)

    def kappa_weyl_part(self):
        """g0-block of kappa, arranged as C_(c1 c2)^a_p."""
        n = self.ps.n
        out = [[[[None] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
        zero = self.ps.ctx.zero
        for c1 in range(n):
            for c2 in range(n):
                if c1 == c2:
                    for a in range(n):
                        for p in range(n):
                            out[c1][c2][a][p] = zero
                    continue
                v = self.kappa.get((c1, c2))
                mat = _proj_values_matrix(self.model, v)
                for a in range(n):
                    for p in range(n):
                        out[c1][c2][a][p] = mat[a + 1][p + 1]
        return out

    def kappa_cotton_part(self):
        """p+-row of kappa, arranged as A_(a c1 c2) (sign frozen here)."""
        n = self.ps.n
        zero = self.ps.ctx.zero
        out = [[[zero] * n for _ in range(n)] for _ in range(n)]
        for c1 in range(n):
            for c2 in range(n):
                if c1 == c2:
                    continue
                v = self.kappa.get((c1, c2))
                mat = _proj_values_matrix(self.model, v)
                for a in range(n):
                    out[a][c1][c2] = -mat[0][a + 1]
        return out

    def normality_defect(self):
        """d* kappa; identically zero for the gauge built here."""
        return context(self.model, "proj").codifferential(self.kappa)


def _proj_values_matrix(model, coords):
    out = None
    for c, b in zip(coords, model.sl_basis):
        if la._is_zero(c):
            continue
        t = la.mat_scale(c, b)
        out = t if out is None else la.mat_add(out, t)
    if out is None:
        k = model.n + 1
        return [[Fraction(0)] * k for _ in range(k)]
    return out


def _two_form_curvature(ps, omega, c1, c2):
    """K(d_c1, d_c2) = d_(c1) w_(c2) - d_(c2) w_(c1) + [w_c1, w_c2]."""
    m1, m2 = omega[c1], omega[c2]
    k = len(m1)
    dm = [[ps.d(m2[i][j], c1) - ps.d(m1[i][j], c2) for j in range(k)]
          for i in range(k)]
    return la.mat_add(dm, la.bracket(m1, m2))


def proj_curvature(ps):
    return ps.curvature()


def cartan_gauge(ps):
    return CartanGauge(ps)


def random_special_structure(n, rng, ctx, nterms=2, degree=2):
    """Sparse random polynomial Christoffels, volume-preserving gauge."""
    names = [f"x{i + 1}" for i in range(n)]
    gamma = {}
    for _ in range(nterms):
        a = rng.randrange(n)
        b = rng.randrange(n)
        c = rng.randrange(n)
        b, c = min(b, c), max(b, c)
        deg = rng.randint(1, degree)
        mono = ctx.one
        for _ in range(deg):
            mono = mono * ctx.var(names[rng.randrange(n)])
        coef = rng.choice([-2, -1, 1, 2])
        gamma[(a, b, c)] = gamma.get((a, b, c), ctx.zero) + coef * mono
    ps = ProjectiveStructure(n, gamma, ctx)
    return ps.specialize()
