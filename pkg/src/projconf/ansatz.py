"""Polynomial-ansatz kernels of linear differential operators.

Used for the flat-model dimension counts: the operator is evaluated on a
monomial basis of fields, the resulting rational-function equations are
cleared of denominators, and the kernel is computed exactly over Q.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from . import linalg as la


def monomials(ctx, max_degree, variables=None):
    """All monomials of total degree <= max_degree in the given variables."""
    names = variables if variables is not None else ctx.variables
    gens = [ctx.var(v) for v in names]
    out = []
    for degs in product(range(max_degree + 1), repeat=len(gens)):
        if sum(degs) > max_degree:
            continue
        m = ctx.one
        for g, d in zip(gens, degs):
            for _ in range(d):
                m = m * g
        out.append(m)
    return out


def _lcm_polys(polys):
    acc = None
    for p in polys:
        if acc is None:
            acc = p
        else:
            acc = acc * p / acc.gcd(p)
    return acc


def kernel_dimension(ctx, images):
    """dim of {c : sum_k c_k images[k] = 0} for lists of RatFunc arrays.

    images[k] is the flattened operator output for the k-th ansatz field;
    all entries are equated to zero as rational functions.
    """
    nk = len(images)
    if nk == 0:
        return 0, []
    length = len(images[0])
    rows = []
    for j in range(length):
        entries = [images[k][j] for k in range(nk)]
        if all(e.is_zero() for e in entries):
            continue
        denoms = [e.raw.denom for e in entries if not e.is_zero()]
        lcm = _lcm_polys(denoms)
        cleared = []
        for e in entries:
            if e.is_zero():
                cleared.append(None)
                continue
            scaled = e.raw * lcm
            if scaled.denom != e.raw.denom.ring.one:
                raise AssertionError("denominator clearing failed")
            cleared.append(scaled.numer)
        monoms = sorted({m for p in cleared if p is not None for m in p.monoms()})
        index = {m: i for i, m in enumerate(monoms)}
        block = [[Fraction(0)] * nk for _ in monoms]
        for k, p in enumerate(cleared):
            if p is None:
                continue
            for m, coeff in p.terms():
                q = Fraction(int(coeff.numerator), int(coeff.denominator))
                block[index[m]][k] = q
        rows.extend(block)
    if not rows:
        return nk, la.eye(nk)
    null = la.qnullspace(rows)
    return len(null), null


def operator_kernel_dim(ctx, basis_fields, operator):
    """Kernel dimension of a linear operator over the span of basis fields."""
    images = []
    for f in basis_fields:
        out = operator(f)
        images.append(list(out))
    return kernel_dimension(ctx, images)[0]
