"""Matrix models of sl(n+1) inside so(n+1,n+1) and all derived subalgebras.

The ambient algebra is realised with respect to the split bilinear form
h = [[0, I], [I, 0]] on R^(2n+2).  Basis vectors are indexed so that the
first n+1 coordinates span the isotropic summand E and the last n+1 span F,
with h(u_i, w_j) = delta_ij.  The distinguished null vector is
v+~ = u_1 + w_(n+1) = (1, 0, ..., 0, 1)^t and its stabiliser algebra is the
conformal parabolic; on the sl(n+1) side the projective parabolic
stabilises the ray through v+ = e_1.

All bases are frozen at build time: grading-compatible order, deterministic
completion within each grade.  Cochain coordinates elsewhere in the package
refer to these orders.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg as la

F0 = Fraction(0)
F1 = Fraction(1)


def _unit(n, i, j):
    m = la.zeros(n)
    m[i][j] = F1
    return m


def include_sl(a):
    """Embed sl(n+1) into so(n+1,n+1): A -> blockdiag(A, -A^t)."""
    k = len(a)
    if not la._is_zero(la.mat_trace(a)):
        raise ValueError("include_sl requires a traceless matrix")
    m = la.zeros(2 * k)
    for i in range(k):
        for j in range(k):
            m[i][j] = a[i][j]
            m[k + i][k + j] = -a[j][i]
    return m


def sl_part(m):
    """Left inverse of include_sl (reads the upper-left block)."""
    k = len(m) // 2
    return [[m[i][j] for j in range(k)] for i in range(k)]


def wedge(h, v, w):
    """so(h) element v^w acting by x -> h(v,x)w - h(w,x)v."""
    hv = la.mat_vec(h, v)
    hw = la.mat_vec(h, w)
    return [[w[i] * hv[j] - v[i] * hw[j] for j in range(len(v))] for i in range(len(v))]


class AlgModel:
    """The full algebraic context for one dimension n >= 2.

    Exposes (among others):
      h, v_plus, v_plus_tilde, v_minus_tilde, K
      sl_basis, g_basis (embedded), gtilde_basis (+ grades), g_perp_basis
      p_basis, q_basis, pprime_basis, p_plus_basis (small matrices)
      ptilde_basis, ptilde_plus_basis, gtilde0_basis, gtilde_minus_basis
      X (2n embedded elements), Z (n), Z_tilde (2n)
      Ebar, Fbar, L bases (vectors); W0 basis of span{v+~, v-~}-perp
    """

    def __init__(self, n):
        if n < 2:
            raise ValueError("n must be at least 2")
        self.n = n
        self.N = 2 * n + 2
        self._build_form()
        self._build_gtilde()
        self._build_sl_side()
        self._build_grading()
        self._killing_constants()
        self._build_dual_bases()
        self._build_subspaces()

    # -- construction ------------------------------------------------------

    def _build_form(self):
        n, N = self.n, self.N
        k = n + 1
        h = la.zeros(N)
        for i in range(k):
            h[i][k + i] = F1
            h[k + i][i] = F1
        self.h = h
        self.v_plus_tilde = [F0] * N
        self.v_plus_tilde[0] = F1
        self.v_plus_tilde[N - 1] = F1
        # second null vector pairing to 1 with v+~, fixing the grading
        self.v_minus_tilde = [F0] * N
        self.v_minus_tilde[k - 1] = Fraction(1, 2)
        self.v_minus_tilde[k] = Fraction(1, 2)
        self.v_plus = [F0] * (n + 1)
        self.v_plus[0] = F1
        self.K = la.zeros(N)
        for i in range(k):
            self.K[i][i] = F1
            self.K[k + i][k + i] = -F1

    def _build_gtilde(self):
        # so(h) = {[[A, B], [C, -A^t]] : B, C skew}, in a raw explicit basis
        k = self.n + 1
        basis = []
        for i in range(k):
            for j in range(k):
                a = _unit(k, i, j)
                basis.append(include_sl_gl(a))
        for i in range(k):
            for j in range(i + 1, k):
                m = la.zeros(self.N)
                m[i][k + j] = F1
                m[j][k + i] = -F1
                basis.append(m)
        for i in range(k):
            for j in range(i + 1, k):
                m = la.zeros(self.N)
                m[k + i][j] = F1
                m[k + j][i] = -F1
                basis.append(m)
        self._gtilde_raw = basis
        self.dim_gtilde = len(basis)

    def _build_sl_side(self):
        n = self.n
        k = n + 1
        # frozen sl(n+1) basis: grade -1, grade 0 (diagonal then offdiag), grade +1
        sl_basis = []
        self.sl_grades = []
        for i in range(1, k):
            sl_basis.append(_unit(k, i, 0))
            self.sl_grades.append(-1)
        for i in range(k - 1):
            d = la.zeros(k)
            d[i][i] = F1
            d[i + 1][i + 1] = -F1
            sl_basis.append(d)
            self.sl_grades.append(0)
        for i in range(1, k):
            for j in range(1, k):
                if i != j:
                    sl_basis.append(_unit(k, i, j))
                    self.sl_grades.append(0)
        for j in range(1, k):
            sl_basis.append(_unit(k, 0, j))
            self.sl_grades.append(1)
        self.sl_basis = sl_basis
        self.g_basis = [include_sl(a) for a in sl_basis]
        self.dim_g = len(sl_basis)

        # the X-frame: n quotient directions for g/p, then n for p/q
        X_small = [_unit(k, i, 0) for i in range(1, k)]
        w = la.zeros(k)
        w[0][0] = F1
        w[1][1] = -F1
        X_small.append(w)
        for j in range(1, n):
            X_small.append(_unit(k, n, j))
        self.X_small = X_small
        self.X = [include_sl(a) for a in X_small]

        # small-matrix subalgebra bases (solution spaces of block constraints)
        self.p_basis = self._small_subalgebra("p")
        self.q_basis = self._small_subalgebra("q")
        self.pprime_basis = self._small_subalgebra("pprime")
        self.p_plus_basis = [_unit(k, 0, j) for j in range(1, k)]

    def _small_subalgebra(self, tag):
        # solve the linear block constraints on sl coordinates
        k = self.n + 1
        rows = la.transpose([la.vec(a) for a in self.sl_basis])
        constraints = []
        idx = lambda i, j: i * k + j
        for i in range(1, k):
            constraints.append(idx(i, 0))
        if tag in ("q", "pprime"):
            for j in range(1, k - 1):
                constraints.append(idx(k - 1, j))
        cmat = [rows[c] for c in constraints]
        if tag == "q":
            # additionally M[k-1][k-1] = -M[0][0]
            cmat.append([x + y for x, y in zip(rows[idx(k - 1, k - 1)], rows[idx(0, 0)])])
        coeffs = la.qnullspace(cmat) if cmat else la.eye(self.dim_g)
        out = []
        for cv in coeffs:
            m = la.zeros(k)
            for c, a in zip(cv, self.sl_basis):
                if c:
                    m = la.mat_add(m, la.mat_scale(c, a))
            out.append(m)
        return out

    def _build_grading(self):
        # conformal grading by the element E0 with E0 v+~ = v+~, E0 v-~ = -v-~
        h = self.h
        self.E0 = la.mat_scale(-1, wedge(h, self.v_plus_tilde, self.v_minus_tilde))
        raw = self._gtilde_raw
        dim = len(raw)
        # matrix of ad(E0) on the raw basis
        cols = []
        raw_cols = la.transpose([la.vec(m) for m in raw])
        for m in raw:
            b = la.vec(la.bracket(self.E0, m))
            coords = la.solve(raw_cols, b)
            cols.append(coords)
        ad = la.transpose(cols)
        graded = []
        grades = []
        for lam in (-1, 0, 1):
            shifted = [[ad[i][j] - (lam if i == j else 0) for j in range(dim)]
                       for i in range(dim)]
            for cv in la.qnullspace(shifted):
                m = la.zeros(self.N)
                for c, b in zip(cv, raw):
                    if c:
                        m = la.mat_add(m, la.mat_scale(c, b))
                graded.append(m)
                grades.append(lam)
        if len(graded) != dim:
            raise AssertionError("grading does not exhaust the algebra")
        self.gtilde_basis = graded
        self.gtilde_grades = grades
        self.gtilde_minus_basis = [m for m, g in zip(graded, grades) if g == -1]
        self.gtilde0_basis = [m for m, g in zip(graded, grades) if g == 0]
        self.ptilde_plus_basis = [m for m, g in zip(graded, grades) if g == 1]
        self.ptilde_basis = self.gtilde0_basis + self.ptilde_plus_basis
        # coordinate extractor for gtilde
        cols = la.transpose([la.vec(m) for m in graded])
        gram = la.mat_mul(la.transpose(cols), cols)
        self._gtilde_coord = la.mat_mul(la.inv(gram), la.transpose(cols))
        sl_cols = la.transpose([la.vec(m) for m in self.sl_basis])
        sl_gram = la.mat_mul(la.transpose(sl_cols), sl_cols)
        self._sl_coord = la.mat_mul(la.inv(sl_gram), la.transpose(sl_cols))

    def gtilde_coords(self, m):
        """Coordinates of a (2n+2)-matrix in the frozen gtilde basis."""
        return la.mat_vec(self._gtilde_coord, la.vec(m))

    def gtilde_from_coords(self, coords):
        m = la.zeros(self.N)
        for c, b in zip(coords, self.gtilde_basis):
            if not la._is_zero(c):
                m = la.mat_add(m, la.mat_scale(c, b))
        return m

    def sl_coords(self, a):
        return la.mat_vec(self._sl_coord, la.vec(a))

    def _build_dual_bases(self):
        n = self.n
        # Z_j in p+ with Btilde(X_i, Z_j) = delta_ij (i, j = 1..n)
        p_plus_emb = [include_sl(a) for a in self.p_plus_basis]
        pair = [[self.killing_gtilde(self.X[i], z) for z in p_plus_emb]
                for i in range(n)]
        inv = la.inv(pair)
        self.Z = []
        for j in range(n):
            m = la.zeros(self.N)
            for c, b in zip([inv[r][j] for r in range(n)], p_plus_emb):
                m = la.mat_add(m, la.mat_scale(c, b))
            self.Z.append(m)
        self.Z_small = [sl_part(z) for z in self.Z]
        # Z~_j in ptilde+ with Btilde(X_i, Z~_j) = delta_ij (i, j = 1..2n)
        pair = [[self.killing_gtilde(self.X[i], z) for z in self.ptilde_plus_basis]
                for i in range(2 * n)]
        inv = la.inv(pair)
        self.Z_tilde = []
        for j in range(2 * n):
            m = la.zeros(self.N)
            for c, b in zip([inv[r][j] for r in range(2 * n)], self.ptilde_plus_basis):
                m = la.mat_add(m, la.mat_scale(c, b))
            self.Z_tilde.append(m)

    def _build_subspaces(self):
        n, N, k = self.n, self.N, self.n + 1
        unit = lambda i: [F1 if a == i else F0 for a in range(N)]
        self.E_vectors = [unit(i) for i in range(k)]
        self.F_vectors = [unit(k + i) for i in range(k)]
        self.Ebar = [unit(i) for i in range(n)]
        self.Fbar = [unit(k + 1 + i) for i in range(n)]
        self.L = [list(self.v_plus_tilde)]
        # W0 = h-orthocomplement of span{v+~, v-~}: model of gtilde/ptilde
        rows = [la.mat_vec(self.h, self.v_plus_tilde),
                la.mat_vec(self.h, self.v_minus_tilde)]
        self.W0 = la.qnullspace(rows)
        # g-perp inside gtilde w.r.t. the Killing form
        rows = []
        for gb in self.g_basis:
            rows.append([self.killing_gtilde(gb, m) for m in self.gtilde_basis])
        self.g_perp_basis = [self.gtilde_from_coords(cv) for cv in la.qnullspace(rows)]
        self.Lambda2Fbar_basis = [wedge(self.h, a, b)
                                  for i, a in enumerate(self.Fbar)
                                  for b in self.Fbar[i + 1:]]
        self.Lambda2Ebar_basis = [wedge(self.h, a, b)
                                  for i, a in enumerate(self.Ebar)
                                  for b in self.Ebar[i + 1:]]
        self._build_quotient_model()

    def _w0_rep(self, v):
        """Representative in W0 of the class of v in L-perp / L."""
        c_minus = la.sum_prod(la.mat_vec(self.h, self.v_minus_tilde), v)
        c_plus = la.sum_prod(la.mat_vec(self.h, self.v_plus_tilde), v)
        if not la._is_zero(c_plus):
            raise ValueError("vector not in the orthocomplement of the null line")
        return [x - c_minus * y for x, y in zip(v, self.v_plus_tilde)]

    def _build_quotient_model(self):
        """Identify gtilde/ptilde with W0 via X +ptilde -> X.v+~ mod L."""
        n = self.n
        self.quotient_model_vectors = [
            self._w0_rep(la.mat_vec(x, self.v_plus_tilde)) for x in self.X]
        self.quotient_form = [
            [la.sum_prod(la.mat_vec(self.h, a), b) for b in self.quotient_model_vectors]
            for a in self.quotient_model_vectors]
        # class coordinates: v in gtilde -> coefficients over the X-frame,
        # via the grade -1 part expressed in the grade -1 parts of the X_i
        xminus_cols = la.transpose(
            [la.vec(self.grading_parts(x)[0]) for x in self.X])
        gram = la.mat_mul(la.transpose(xminus_cols), xminus_cols)
        self._class_extract = la.mat_mul(la.inv(gram), la.transpose(xminus_cols))
        self.X_minus = [self.grading_parts(x)[0] for x in self.X]
        # one-shot matrix: vec(v) -> class coordinates (absorbs the grade
        # projection, so repeated calls stay cheap)
        basis_cols = la.transpose([la.vec(b) for b in self.gtilde_basis])
        sel = [[F1 if (i == j and self.gtilde_grades[i] == -1) else F0
                for j in range(self.dim_gtilde)] for i in range(self.dim_gtilde)]
        proj_minus = la.qmatmul(basis_cols, la.qmatmul(sel, self._gtilde_coord))
        self._class_mat = la.qmatmul(self._class_extract, proj_minus)
        # e and f inside the X-frame coordinates of gtilde/ptilde:
        # f is spanned by the classes of X_(n+1)..X_(2n) (vertical);
        # e is the preimage of the classes of Ebar in L-perp / L
        self.f_class_coords = [
            [F1 if i == n + j else F0 for i in range(2 * n)] for j in range(n)]
        ebar_reps = [self._w0_rep(v) for v in self.Ebar]
        stacked = la.transpose(self.quotient_model_vectors + ebar_reps)
        null = la.qnullspace(stacked)
        self.e_class_coords = []
        for v in null:
            coeff = v[: 2 * n]
            if any(coeff):
                self.e_class_coords.append(list(coeff))
        if la.qrank(self.e_class_coords) != n:
            raise AssertionError("e-distribution model has wrong rank")
        self.k_class_coords = self.class_coords(self.K)

    def class_coords(self, v):
        """Coordinates of v + ptilde in the X-frame basis of gtilde/ptilde."""
        return la.mat_vec(self._class_mat, la.vec(v))

    def _killing_constants(self):
        # trace-form constants computed from ad-traces, not assumed
        self.k_gtilde = self._trace_form_constant(self.gtilde_basis, self.gtilde_coords)
        self.k_sl = self._trace_form_constant(self.sl_basis, self.sl_coords)
        # Btilde restricted to g equals c * B with one fixed constant c
        c = None
        for a in self.sl_basis:
            for b in self.sl_basis:
                tr = la.mat_trace(la.mat_mul(a, b))
                if tr:
                    bt = self.killing_gtilde(include_sl(a), include_sl(b))
                    bb = self.killing_sl(a, b)
                    if c is None:
                        c = Fraction(bt, bb)
                    elif bt != c * bb:
                        raise AssertionError("B~|g is not proportional to B")
        self.killing_ratio = c

    def _trace_form_constant(self, basis, coords):
        # tr(ad a . ad b) = k * tr(a b) for a semisimple matrix algebra
        for a in basis:
            for b in basis:
                tr = la.mat_trace(la.mat_mul(a, b))
                if tr:
                    s = F0
                    for c_idx, m in enumerate(basis):
                        v = coords(la.bracket(a, la.bracket(b, m)))
                        s += v[c_idx]
                    return Fraction(s, tr)
        raise AssertionError("degenerate trace form")

    # -- forms and operations ----------------------------------------------

    def killing_gtilde(self, x, y):
        return self.k_gtilde * la.mat_trace(la.mat_mul(x, y))

    def killing_sl(self, x, y):
        return self.k_sl * la.mat_trace(la.mat_mul(x, y))

    def killing_form(self, x, y, algebra="gtilde"):
        """Killing form in the tagged algebra ('gtilde' or 'g'/'sl')."""
        if len(x) != len(y):
            raise ValueError("dimension mismatch")
        if algebra in ("g", "sl"):
            if len(x) != self.n + 1:
                raise ValueError("dimension mismatch for sl(n+1)")
            return self.killing_sl(x, y)
        if len(x) != self.N:
            raise ValueError("dimension mismatch for so(n+1,n+1)")
        return self.killing_gtilde(x, y)

    def is_h_skew(self, m):
        mt_h = la.mat_mul(la.transpose(m), self.h)
        h_m = la.mat_mul(self.h, m)
        return la.mat_is_zero(la.mat_add(mt_h, h_m))

    def grading_parts(self, m):
        """Split an h-skew matrix into (grade -1, grade 0, grade +1) parts."""
        coords = self.gtilde_coords(m)
        parts = []
        for lam in (-1, 0, 1):
            sel = [c if g == lam else F0 * c for c, g in zip(coords, self.gtilde_grades)]
            parts.append(self.gtilde_from_coords(sel))
        return tuple(parts)

    def decompose_gtilde(self, m):
        """Split m in gtilde into ((E x F)_0, (E x F)_Tr, Lambda^2 E, Lambda^2 F)."""
        if not self.is_h_skew(m):
            raise ValueError("element is not h-skew")
        k = self.n + 1
        a = [[m[i][j] for j in range(k)] for i in range(k)]
        tr = la.mat_trace(a)
        a0 = [[a[i][j] - (tr / k if i == j else F0) for j in range(k)] for i in range(k)]
        part_g = include_sl(a0)
        part_tr = la.mat_scale(tr / k, self.K)
        part_l2e = la.zeros(self.N)
        part_l2f = la.zeros(self.N)
        for i in range(k):
            for j in range(k):
                part_l2e[i][k + j] = m[i][k + j]
                part_l2f[k + i][j] = m[k + i][j]
        return part_g, part_tr, part_l2e, part_l2f

    def in_span(self, basis, m):
        if not basis:
            return la.mat_is_zero(m)
        return la.in_span([la.vec(b) for b in basis], la.vec(m))

    def membership(self, m, sub):
        """Block-constraint membership test for the tagged subalgebra."""
        small = {"sl", "p", "q", "pprime", "p_plus"}
        big = {"g", "gtilde", "ptilde", "ptilde_plus", "g_perp"}
        k = self.n + 1
        if sub in small:
            if len(m) != k:
                raise ValueError(f"size mismatch: expected {k}")
            if not la._is_zero(la.mat_trace(m)):
                return False
            if sub == "sl":
                return True
            if any(not la._is_zero(m[i][0]) for i in range(1, k)):
                return False
            if sub == "p":
                return True
            if sub == "p_plus":
                return all(la._is_zero(m[i][j])
                           for i in range(k) for j in range(k)
                           if not (i == 0 and j >= 1))
            if any(not la._is_zero(m[k - 1][j]) for j in range(1, k - 1)):
                return False
            if sub == "pprime":
                return True
            return la._is_zero(m[k - 1][k - 1] + m[0][0])  # q
        if sub in big:
            if len(m) != self.N:
                raise ValueError(f"size mismatch: expected {self.N}")
            if not self.is_h_skew(m):
                return False
            if sub == "gtilde":
                return True
            if sub == "g":
                a = sl_part(m)
                return la.mat_is_zero(la.mat_sub(m, include_sl(a)))
            if sub == "ptilde":
                image = la.mat_vec(m, self.v_plus_tilde)
                return la.rank([image, self.v_plus_tilde]) <= 1
            if sub == "ptilde_plus":
                return self.in_span(self.ptilde_plus_basis, m)
            if sub == "g_perp":
                return all(la._is_zero(self.killing_gtilde(gb, m))
                           for gb in self.g_basis)
        raise ValueError(f"unknown subalgebra tag {sub!r}")

    # -- debug dump ---------------------------------------------------------

    def to_json(self):
        import json

        def enc(mats):
            return [[[str(x) for x in row] for row in m] for m in mats]

        return json.dumps({
            "n": self.n,
            "h": [[str(x) for x in row] for row in self.h],
            "g_basis": enc(self.g_basis),
            "gtilde_grades": self.gtilde_grades,
            "X": enc(self.X),
            "Z": enc(self.Z),
            "Z_tilde": enc(self.Z_tilde),
            "killing_ratio": str(self.killing_ratio),
        })


def include_sl_gl(a):
    """blockdiag(A, -A^t) for arbitrary A (used only to span so(h))."""
    k = len(a)
    m = la.zeros(2 * k)
    for i in range(k):
        for j in range(k):
            m[i][j] = a[i][j]
            m[k + i][k + j] = -a[j][i]
    return m


_MODEL_CACHE = {}


def build_model(n):
    """Construct the algebraic model for dimension n (cached; immutable)."""
    if n not in _MODEL_CACHE:
        _MODEL_CACHE[n] = AlgModel(n)
    return _MODEL_CACHE[n]
