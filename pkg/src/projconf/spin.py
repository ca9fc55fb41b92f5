"""The real 2^(n+1)-dimensional spin representation of so(n+1,n+1).

The module Delta is the exterior algebra of the isotropic summand E:
basis vectors u_i of E act by (scaled) wedging, basis vectors w_i of F by
contraction, normalised so that the Clifford relation

    v.(w.s) + w.(v.s) = 2 h(v,w) s

holds with a plus sign (the anticommutator convention is fixed here once
and for all; the geometric verifications downstream only ever test
convention-covariant statements).  By construction the empty wedge is the
pure spinor s_F with kernel F and the top wedge is s_E with kernel E.

The Lie algebra action is dlam(M) = 1/8 sum_k [c(M b_k), c(b^k)] over any
h-dual pair of bases; it satisfies [dlam(M), c(x)] = c(Mx) and is
precomputed on the frozen gtilde basis so that evaluating it on matrices
with rational-function entries costs one coordinate extraction.

Parity: Delta_- is the component containing the empty wedge (even wedge
degree), Delta_+ the odd component.

The distinguished null pair (v+~, v-~) splits Delta into the +-1/2
eigenspaces of dlam(E0); the -1/2 eigenspace is the model for base
spinors on the correspondence space, with c(v) for v in W0 restricting to
it.  Slot extraction of spin tractors lives in `conformal`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from . import linalg as la

F0 = Fraction(0)
F1 = Fraction(1)


class SpinModel:
    """Spin representation data attached to an AlgModel."""

    def __init__(self, model):
        self.model = model
        self.n = model.n
        k = self.n + 1
        self.dim_delta = 2 ** k
        self.subsets = []
        for size in range(k + 1):
            self.subsets.extend(combinations(range(k), size))
        self.subsets.sort(key=lambda s: (len(s), s))
        self.index = {s: i for i, s in enumerate(self.subsets)}
        self.parity = ["-" if len(s) % 2 == 0 else "+" for s in self.subsets]
        self.s_F = self._basis_vector(())
        self.s_E = self._basis_vector(tuple(range(k)))
        self._build_clifford()
        self._build_spin_rep()
        self._build_slot_split()
        self._build_pairing()

    # -- Clifford action ---------------------------------------------------

    def _basis_vector(self, subset):
        v = [F0] * self.dim_delta
        v[self.index[subset]] = F1
        return v

    def _build_clifford(self):
        k = self.n + 1
        d = self.dim_delta
        mats = []
        # u_i: scaled wedge (factor 2 so the anticommutator is 2h)
        for i in range(k):
            m = la.zeros(d)
            for s in self.subsets:
                if i not in s:
                    t = tuple(sorted(s + (i,)))
                    sign = (-1) ** sum(1 for x in s if x < i)
                    m[self.index[t]][self.index[s]] = Fraction(2 * sign)
            mats.append(m)
        # w_i: contraction against the dual pairing <w_i, u_j> = delta_ij
        for i in range(k):
            m = la.zeros(d)
            for s in self.subsets:
                if i in s:
                    t = tuple(x for x in s if x != i)
                    sign = (-1) ** sum(1 for x in s if x < i)
                    m[self.index[t]][self.index[s]] = Fraction(sign)
            mats.append(m)
        self.clifford_mats = mats

    def clifford_mat(self, v):
        """Matrix of Clifford action of a vector in R^(n+1,n+1)."""
        d = self.dim_delta
        out = None
        for a, c in enumerate(v):
            if la._is_zero(c):
                continue
            term = la.mat_scale(c, self.clifford_mats[a])
            out = term if out is None else la.mat_add(out, term)
        return la.zeros(d) if out is None else out

    def clifford_act(self, v, s):
        if len(v) != 2 * self.n + 2 or len(s) != self.dim_delta:
            raise ValueError("size mismatch")
        return la.mat_vec(self.clifford_mat(v), s)

    # -- Lie algebra action --------------------------------------------------

    def _build_spin_rep(self):
        model = self.model
        N = model.N
        k = self.n + 1
        # h-dual basis: dual of u_i is w_i and conversely
        dual = list(range(k, 2 * k)) + list(range(k))
        images = []
        for m in model.gtilde_basis:
            acc = la.zeros(self.dim_delta)
            for a in range(N):
                mb = [m[i][a] for i in range(N)]  # M applied to basis vector a
                cm = self.clifford_mat(mb)
                cd = self.clifford_mats[dual[a]]
                acc = la.mat_add(acc, la.mat_sub(la.mat_mul(cm, cd),
                                                 la.mat_mul(cd, cm)))
            images.append(la.mat_scale(Fraction(1, 8), acc))
        self._spin_rep_basis = images

    def spin_rep(self, m):
        """dlam(M) for M in gtilde; supports rational-function entries."""
        coords = self.model.gtilde_coords(m)
        out = None
        for c, img in zip(coords, self._spin_rep_basis):
            if la._is_zero(c):
                continue
            term = la.mat_scale(c, img)
            out = term if out is None else la.mat_add(out, term)
        return la.zeros(self.dim_delta) if out is None else out

    # -- purity -------------------------------------------------------------

    def purity_kernel(self, s):
        """{v : v.s = 0} as a list of basis vectors of R^(n+1,n+1)."""
        if all(la._is_zero(x) for x in s):
            raise ValueError("zero spinor has no purity kernel")
        N = 2 * self.n + 2
        cols = [la.mat_vec(self.clifford_mats[a], s) for a in range(N)]
        rows = la.transpose(cols)  # dim_delta x N, kernel = annihilator
        return la.nullspace(rows)

    def is_pure(self, s):
        return len(self.purity_kernel(s)) == self.n + 1

    # -- slot split along the null pair --------------------------------------

    def _build_slot_split(self):
        model = self.model
        self.dlam_E0 = self.spin_rep(model.E0)
        d = self.dim_delta
        half = Fraction(1, 2)
        for sign, name in ((-1, "minus"), (1, "plus")):
            shifted = [[self.dlam_E0[i][j] - (sign * half if i == j else F0)
                        for j in range(d)] for i in range(d)]
            basis = la.qnullspace(shifted)
            setattr(self, f"eig_{name}_basis", basis)
        if len(self.eig_minus_basis) != d // 2 or len(self.eig_plus_basis) != d // 2:
            raise AssertionError("E0 eigenspace split failed")
        # projection matrices onto eigencoordinates
        cols = la.transpose(self.eig_minus_basis + self.eig_plus_basis)
        inv = la.inv(cols)
        self.pr_minus = inv[: d // 2]
        self.pr_plus = inv[d // 2:]
        self.emb_minus = la.transpose(self.eig_minus_basis)
        self.emb_plus = la.transpose(self.eig_plus_basis)

    def base_clifford_mat(self, w):
        """Clifford action of w in W0 restricted to the -1/2 eigenspace."""
        full = self.clifford_mat(w)
        return la.mat_mul(self.pr_minus, la.mat_mul(full, self.emb_minus))

    def base_parity(self, idx):
        """Total wedge parity of the idx-th -1/2 eigenbasis vector."""
        v = self.eig_minus_basis[idx]
        pars = {self.parity[i] for i, x in enumerate(v) if not la._is_zero(x)}
        if len(pars) != 1:
            raise AssertionError("eigenbasis vector of mixed parity")
        return pars.pop()

    # -- invariant pairing ----------------------------------------------------

    def _build_pairing(self):
        # An invariant pairing on the wedge model pairs complementary
        # subsets only; solve the invariance constraints on that ansatz and
        # then verify invariance under the full algebra.
        d = self.dim_delta
        k = self.n + 1
        full = tuple(range(k))
        slots = [(self.index[s], self.index[tuple(x for x in full if x not in s)])
                 for s in self.subsets]
        rows = []
        for rep in self._spin_rep_basis:
            for i in range(d):
                for j in range(d):
                    # constraint entry (i, j): sum_k rep[k][i] B[k][j] + B[i][k] rep[k][j]
                    coeffs = [F0] * len(slots)
                    for t, (a, b) in enumerate(slots):
                        c = F0
                        if b == j:
                            c += rep[a][i]
                        if a == i:
                            c += rep[b][j]
                        if c:
                            coeffs[t] = c
                    if any(coeffs):
                        rows.append(coeffs)
        sols = la.qnullspace(rows)
        self.invariant_pairing_dim = len(sols)
        iE = self.index[full]
        iF = self.index[()]
        tE = slots.index((iE, iF))
        chosen = None
        for sol in sols:
            if sol[tE] != 0:
                chosen = sol
                break
        if chosen is None:
            raise AssertionError("no invariant pairing couples s_E and s_F")
        scale = chosen[tE]
        mat = la.zeros(d)
        for c, (a, b) in zip(chosen, slots):
            mat[a][b] = c / scale
        self.pairing_mat = mat
        # full invariance check against every basis element
        for rep in self._spin_rep_basis:
            lhs = la.mat_add(la.mat_mul(la.transpose(rep), mat),
                             la.mat_mul(mat, rep))
            if not la.mat_is_zero(lhs):
                raise AssertionError("pairing ansatz misses an invariance constraint")

    def pairing(self, s1, s2):
        return la.sum_prod(la.mat_vec(self.pairing_mat, s2), s1)


_SPIN_CACHE = {}


def build_spin_model(model):
    """Spin model attached to an AlgModel (cached per dimension)."""
    if model.n not in _SPIN_CACHE:
        _SPIN_CACHE[model.n] = SpinModel(model)
    return _SPIN_CACHE[model.n]
