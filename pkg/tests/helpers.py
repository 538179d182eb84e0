"""Independent oracles used to pin conventions in the main pipeline.

Fox calculus on the Wirtinger presentation gives the Alexander polynomial
straight from a PD code, with no Seifert surface and no braiding, so it
cross-checks the geometric pipeline end to end.
"""

import sympy
from sympy.polys.matrices import DomainMatrix

_t = sympy.Symbol("t")


def wirtinger_generators(d):
    """Over-arc classes: PD arcs merged through every over-pass."""
    parent = {a: a for a in d._incidence}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in d.crossings:
        ra, rb = find(x.over_in), find(x.over_out)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return find


def fox_alexander(d):
    """Alexander polynomial of a knot diagram via Fox calculus.

    Returns a sympy Poly in t, canonically normalized (no t factor,
    positive leading coefficient).  The diagram must be a knot.
    """
    if d.n_components != 1:
        raise ValueError("fox_alexander handles knots only")
    if not d.crossings:
        return sympy.Poly(1, _t)
    find = wirtinger_generators(d)
    gens = sorted({find(a) for a in d._incidence})
    col = {g: i for i, g in enumerate(gens)}
    n = len(d.crossings)
    assert len(gens) == n
    rows = []
    for x in d.crossings:
        row = [sympy.Integer(0)] * n
        o = col[find(x.over_in)]
        ui = col[find(x.under_in)]
        uo = col[find(x.under_out)]
        if x.sign > 0:
            # u_out = o u_in o^{-1}:  d/do = 1 - t, d/du_in = t, d/du_out = -1
            row[o] += 1 - _t
            row[ui] += _t
            row[uo] += -1
        else:
            # u_out = o^{-1} u_in o, row scaled by t
            row[o] += _t - 1
            row[ui] += 1
            row[uo] += -_t
        rows.append(row)
    minor = [[rows[i][j] for j in range(1, n)] for i in range(1, n)]
    ring = sympy.QQ[_t]
    dm = DomainMatrix(
        [[ring.from_sympy(sympy.expand(e)) for e in r] for r in minor],
        (n - 1, n - 1),
        ring,
    )
    det = ring.to_sympy(dm.det())
    return alex_canonical(det)


def alex_canonical(expr):
    """Normalize up to units +-t^k: no t factor, positive leading coeff."""
    p = sympy.Poly(sympy.expand(expr), _t)
    if p.is_zero:
        return p
    coeffs = p.all_coeffs()
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    p = sympy.Poly(coeffs, _t)
    if p.LC() < 0:
        p = -p
    return p


def alex_t():
    return _t
