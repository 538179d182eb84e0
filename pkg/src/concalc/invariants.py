"""Alexander polynomials and Levine-Tristram signatures, exactly.

The signature at angle theta is sign((1-w)A + (1-conj w)A^T) with
w = e^{2pi i theta}.  Values are certified:

* at rational theta, H(theta) has entries in a cyclotomic field; its
  characteristic polynomial is computed exactly there, and since H is
  Hermitian the polynomial is real-rooted, so Descartes' rule of signs
  counts positive/negative eigenvalues exactly (zero coefficients are
  decided by an exact field zero-test, nonzero signs by precision-
  escalated evaluation);
* jump angles are the unit-circle roots of det(A - tA^T), located by
  factoring over the integers; an irreducible factor has unit-circle
  roots only if it is self-inversive, and then x = t + 1/t turns the
  factor into a real polynomial whose roots in (-2, 2) are isolated
  exactly.  Cyclotomic factors give exact rational angles; other factors
  give algebraic angles carried as (minimal polynomial of 2cos(2*pi*theta),
  isolating interval).

A numeric eigenvalue fast path is used only when the matrix is provably
nonsingular at the angle (Alexander determinant nonzero there, checked
exactly) and the numeric spectrum is well separated from zero; anything
marginal escalates to the exact path.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
import sympy
from sympy.polys.matrices import DomainMatrix

from .diagram import LinkDiagram
from .seifert import (  # noqa: F401  (re-exported API)
    SeifertMatrix,
    alexander_det,
    braid_seifert_matrix,
    compress,
    seifert_matrix,
)

_t = sympy.Symbol("t")
_x = sympy.Symbol("x")


# ---------------------------------------------------------------------------
# Alexander polynomials


@dataclass(frozen=True)
class AlexanderPoly:
    """Canonical representative: no t factor, positive leading coefficient.

    ``coeffs`` run from the constant term up; empty means the zero
    polynomial (split links).
    """

    coeffs: tuple[int, ...]

    @classmethod
    def from_poly(cls, p: sympy.Poly) -> "AlexanderPoly":
        if p.is_zero:
            return cls(())
        coeffs = [sympy.Integer(c) for c in reversed(p.all_coeffs())]
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
        if coeffs[-1] < 0:
            coeffs = [-c for c in coeffs]
        return cls(tuple(int(c) for c in coeffs))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    @property
    def is_symmetric(self) -> bool:
        return self.coeffs == tuple(reversed(self.coeffs))

    def at_one(self) -> int:
        return sum(self.coeffs)

    def poly(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.coeffs)) or [0], _t)

    def __mul__(self, other: "AlexanderPoly") -> "AlexanderPoly":
        return AlexanderPoly.from_poly(self.poly() * other.poly())

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return str(self.poly().as_expr())


def alexander(A: SeifertMatrix) -> AlexanderPoly:
    """Normalized Alexander polynomial det(A - tA^T) up to units."""
    return AlexanderPoly.from_poly(alexander_det(A))


# ---------------------------------------------------------------------------
# Exact signature kernel


def _sign_of_real(expr, zero_exact: bool) -> int:
    """Sign of a real algebraic sympy expression; zero only if exact."""
    if zero_exact:
        return 0
    for prec in (20, 40, 80, 160, 320, 640):
        # evalf before taking the real part: symbolic re() on nested
        # algebraic expressions is orders of magnitude slower
        num = expr.evalf(prec)
        if num.is_number:
            v, _ = num.as_real_imag()
        else:
            v = sympy.re(expr).evalf(prec)
        if v == 0:
            continue
        if abs(v) > sympy.Float(10) ** (-prec + 8):
            return 1 if v > 0 else -1
    raise ArithmeticError(f"could not certify sign of {expr}")


def _descartes_counts(signs: list[int]) -> tuple[int, int, int]:
    """(#positive, #negative, #zero) roots of a real-rooted monic poly
    from the signs of its coefficients, leading first."""
    nzero = 0
    while signs and signs[-1] == 0:
        signs.pop()
        nzero += 1
    nonzero = [s for s in signs if s != 0]
    pos = sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)
    # p(-lambda): flip signs at odd distance from the leading term
    flipped = [s if (len(signs) - 1 - i) % 2 == 0 else -s
               for i, s in enumerate(signs)]
    nonzero = [s for s in flipped if s != 0]
    neg = sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)
    return pos, neg, nzero


@functools.lru_cache(maxsize=None)
def _unit_circle_field(omega_expr):
    """QQ(omega) together with omega as a field element, memoized: the
    minimal-polynomial search inside algebraic_field dominates repeated
    signature evaluations at the same angle.  For omega = e^{2 pi i a/q}
    the minimal polynomial is the q-th cyclotomic polynomial, so we hand
    it to sympy instead of letting it search."""
    theta = _rational_angle_of(omega_expr)
    if theta is not None:
        q = theta.denominator
        alpha = sympy.AlgebraicNumber(
            (sympy.Poly(sympy.cyclotomic_poly(q, _x), _x), omega_expr))
        K = sympy.QQ.algebraic_field(alpha)
        w = K([sympy.QQ(1), sympy.QQ(0)])  # the designated generator
    else:
        K = sympy.QQ.algebraic_field(omega_expr)
        w = K.from_sympy(omega_expr)
    return K, w


def _rational_angle_of(omega_expr) -> Fraction | None:
    """theta with omega = e^{2 pi i theta}, 0 < theta < 1, if omega has
    exactly the shape produced by _omega; None otherwise."""
    if omega_expr.func is not sympy.exp:
        return None
    ratio = sympy.cancel(omega_expr.args[0] / (2 * sympy.pi * sympy.I))
    if not (ratio.is_Rational and 0 < ratio < 1):
        return None
    return Fraction(int(ratio.p), int(ratio.q))


def _sig_null_exact(entries, omega_expr) -> tuple[int, int]:
    """(signature, nullity) of (1-w)A + (1-1/w)A^T for a unit-circle
    algebraic number w, by exact charpoly + Descartes."""
    n = len(entries)
    if n == 0:
        return 0, 0
    K, w = _unit_circle_field(omega_expr)
    one = K.one
    u, v = one - w, one - one / w  # conj w = 1/w on the unit circle
    H = [
        [u * K.convert(entries[i][j]) + v * K.convert(entries[j][i])
         for j in range(n)]
        for i in range(n)
    ]
    coeffs = DomainMatrix(H, (n, n), K).charpoly()
    signs = []
    for c in coeffs:
        if not c:
            signs.append(0)
        else:
            signs.append(_sign_of_real(K.to_sympy(c), False))
    pos, neg, nzero = _descartes_counts(signs)
    return pos - neg, nzero


def _omega(theta: Fraction):
    return sympy.exp(2 * sympy.pi * sympy.I * sympy.Rational(theta.numerator,
                                                             theta.denominator))


def _delta_vanishes_at(delta: sympy.Poly, theta: Fraction) -> bool:
    """Exact test: does det(A - tA^T) vanish at e^{2 pi i theta}?"""
    if delta.is_zero:
        return True
    q = theta.denominator
    phi = sympy.Poly(sympy.cyclotomic_poly(q, _t), _t)
    return sympy.rem(delta, phi, _t).is_zero


def _sig_fast(entries, theta: Fraction) -> tuple[int, int] | None:
    """Numeric path, valid only when nonsingularity is known exactly and
    the spectrum is well separated from zero."""
    n = len(entries)
    w = complex(mpmath.e ** (2j * mpmath.pi * theta.numerator / theta.denominator))
    A = np.array(entries, dtype=complex)
    H = (1 - w) * A + (1 - w.conjugate()) * A.T
    ev = np.linalg.eigvalsh(H)
    scale = max(1.0, float(np.abs(H).max()) * n)
    if ev.size and np.abs(ev).min() < 1e-8 * scale:
        return None
    return int((ev > 0).sum() - (ev < 0).sum()), 0


def lt_signature(A: SeifertMatrix, theta: Fraction) -> int:
    """Levine-Tristram signature at a rational angle; 0 at theta = 0."""
    theta = Fraction(theta) % 1
    if theta == 0 or A.size == 0:
        return 0
    if not _delta_vanishes_at(alexander_det(A), theta):
        fast = _sig_fast(A.entries, theta)
        if fast is not None:
            return fast[0]
    return _sig_null_exact(A.entries, _omega(theta))[0]


def nullity(A: SeifertMatrix, theta: Fraction) -> int:
    """Nullity of H(theta) (including directions degenerate at every
    angle that compression split off)."""
    theta = Fraction(theta) % 1
    if theta == 0:
        raise ValueError("nullity undefined at theta = 0 (H vanishes)")
    if A.size == 0:
        return A.extra_nullity
    if not _delta_vanishes_at(alexander_det(A), theta):
        return A.extra_nullity
    return _sig_null_exact(A.entries, _omega(theta))[1] + A.extra_nullity


# ---------------------------------------------------------------------------
# Jump isolation


def _is_palindromic(c: list[int]) -> bool:
    return c == c[::-1]


def _cyclotomic_index(f: sympy.Poly) -> int | None:
    d = f.degree()
    if f.LC() != 1:
        return None
    for n in range(1, 2 * d * d + 3):
        if sympy.totient(n) == d and sympy.Poly(
            sympy.cyclotomic_poly(n, _t), _t
        ) == f:
            return n
    return None


def _palindromic_reduction(f: sympy.Poly) -> sympy.Poly:
    """For palindromic f of even degree 2m, the polynomial g with
    g(t + 1/t) = f(t) / t^m."""
    c = f.all_coeffs()  # leading first
    m = f.degree() // 2
    a = list(reversed(c))  # constant first; a[m+j] = a[m-j]
    z_prev, z_cur = sympy.Integer(2), _x  # t^0 + t^0, t + 1/t
    g = sympy.Integer(a[m]) + (a[m + 1] * z_cur if m >= 1 else 0)
    for j in range(2, m + 1):
        z_prev, z_cur = z_cur, sympy.expand(_x * z_cur - z_prev)
        g = g + a[m + j] * z_cur
    return sympy.Poly(sympy.expand(g), _x)


def _fraction_from_mpf(v, pad) -> Fraction:
    return Fraction(mpmath.nstr(v, 40, strip_zeros=False)) + Fraction(pad)


def _theta_interval(x_lo: Fraction, x_hi: Fraction) -> tuple[Fraction, Fraction]:
    """theta = arccos(x/2) / (2 pi) on a certified x-interval in (-2, 2);
    decreasing in x.  mpmath at 50 digits with generous padding."""
    with mpmath.workdps(50):
        lo = mpmath.acos(mpmath.mpf(x_hi.numerator) / x_hi.denominator / 2) / (2 * mpmath.pi)
        hi = mpmath.acos(mpmath.mpf(x_lo.numerator) / x_lo.denominator / 2) / (2 * mpmath.pi)
        return (_fraction_from_mpf(lo, Fraction(-1, 10**35)),
                _fraction_from_mpf(hi, Fraction(1, 10**35)))


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Smallest-denominator rational strictly inside (lo, hi)."""
    assert lo < hi
    if lo < 0 < hi:
        return Fraction(0)
    if hi <= 0:
        return -_simplest_between(-hi, -lo)
    fl = lo.numerator // lo.denominator
    if hi > fl + 1:
        return Fraction(fl + 1)
    if lo == fl:
        # open interval (fl, hi) with hi <= fl+1: take fl + 1/n
        frac = hi - fl
        return fl + Fraction(1, frac.denominator // frac.numerator + 1)
    # x = fl + 1/y with y in the reciprocal interval
    return fl + 1 / _simplest_between(1 / (hi - fl), 1 / (lo - fl))


@dataclass(frozen=True)
class Jump:
    """One jump of the signature step function.

    ``theta`` is exact when the angle is rational, else None and the
    angle is pinned by ``cos_minpoly`` (minimal polynomial of
    2cos(2*pi*theta), leading coefficient first) together with the
    isolating intervals for x = 2cos(2*pi*theta) and for theta itself.
    """

    theta: Fraction | None
    cos_minpoly: tuple[int, ...]
    x_interval: tuple[Fraction, Fraction]
    interval: tuple[Fraction, Fraction]
    sigma: int
    nullity: int
    averaged_times_2: int


@dataclass(frozen=True)
class SignatureFunction:
    """Certified step function theta -> signature on (0, 1).

    ``plateaus[i]`` is the constant value on the open interval between
    jumps i-1 and i (with theta = 0 and 1 as outer boundaries);
    ``generic_nullity`` is the nullity away from the jumps.
    """

    jumps: tuple[Jump, ...]
    plateaus: tuple[int, ...]
    generic_nullity: int
    delta: tuple[int, ...]  # det(A - tA^T) coefficients, constant first

    def _delta_poly(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.delta)) or [0], _t)

    def _locate(self, theta: Fraction) -> tuple[str, int]:
        theta = Fraction(theta) % 1
        if theta == 0:
            return ("boundary", 0)
        for i, j in enumerate(self.jumps):
            if j.theta is not None and j.theta == theta:
                return ("jump", i)
        # strictly between jumps: count jumps below theta
        below = 0
        for j in self.jumps:
            if j.theta is not None:
                if j.theta < theta:
                    below += 1
            else:
                lo, hi = j.interval
                if hi < theta:
                    below += 1
                elif lo > theta:
                    pass
                else:
                    below += 0 if self._side(theta, j) < 0 else 1
        return ("plateau", below)

    def _side(self, theta: Fraction, j: Jump) -> int:
        """-1 if theta < jump angle, +1 if greater (theta is not the jump:
        rational angles of jumps are stored exactly)."""
        g = sympy.Poly(list(j.cos_minpoly), _x)
        x_lo, x_hi = j.x_interval
        mirror = j.interval[0] > Fraction(1, 2)
        for dps in (60, 120, 240, 480):
            with mpmath.workdps(dps):
                c = 2 * mpmath.cos(2 * mpmath.pi * theta.numerator / theta.denominator)
                pad = mpmath.mpf(10) ** (-dps + 10)
                c_lo = _fraction_from_mpf(c - pad, 0)
                c_hi = _fraction_from_mpf(c + pad, 0)
            # refine the x-interval by exact bisection until disjoint from c
            while not (x_hi < c_lo or x_lo > c_hi):
                mid = (x_lo + x_hi) / 2
                if mid == c_lo or mid == c_hi:
                    break
                s_mid = g.eval(sympy.Rational(mid.numerator, mid.denominator))
                s_lo = g.eval(sympy.Rational(x_lo.numerator, x_lo.denominator))
                if s_mid == 0:
                    x_lo = x_hi = mid
                    break
                if (s_mid > 0) != (s_lo > 0):
                    x_hi = mid
                else:
                    x_lo = mid
                if x_hi - x_lo < (c_hi - c_lo) / 4 and not (x_hi < c_lo or x_lo > c_hi):
                    break  # need tighter cos bounds instead
            if x_hi < c_lo:
                # x_root < cos-value; theta on (0,1/2): theta > jump angle
                return 1 if not mirror else -1
            if x_lo > c_hi:
                return -1 if not mirror else 1
        raise ArithmeticError("could not separate angle from jump")

    def sigma(self, theta: Fraction) -> int:
        kind, i = self._locate(theta)
        if kind == "boundary":
            return 0
        if kind == "jump":
            return self.jumps[i].sigma
        return self.plateaus[i]

    def nullity_at(self, theta: Fraction) -> int:
        kind, i = self._locate(theta)
        if kind == "boundary":
            return 0
        if kind == "jump":
            return self.jumps[i].nullity
        return self.generic_nullity

    def sigma_bar_times_2(self, theta: Fraction) -> int:
        kind, i = self._locate(theta)
        if kind == "boundary":
            return self.plateaus[0] + self.plateaus[-1]
        if kind == "jump":
            return self.jumps[i].averaged_times_2
        return 2 * self.plateaus[i]

    def is_jump(self, theta: Fraction) -> bool:
        return self._locate(theta)[0] == "jump"

    def max_sigma_bar_times_2(self) -> int:
        vals = [2 * p for p in self.plateaus] + [j.averaged_times_2 for j in self.jumps]
        return max(vals)

    def min_sigma_bar_times_2(self) -> int:
        vals = [2 * p for p in self.plateaus] + [j.averaged_times_2 for j in self.jumps]
        return min(vals)


def _unit_circle_data(delta: sympy.Poly):
    """Yield jump-angle descriptors from the irreducible factors of delta:
    either ('rational', Fraction) or
    ('algebraic', cos_minpoly, x_interval, theta_interval)."""
    out = []
    for f, _mult in sympy.factor_list(delta, _t)[1]:
        f = sympy.Poly(f, _t)
        d = f.degree()
        if d == 0:
            continue
        coeffs = [int(c) for c in f.all_coeffs()]
        if d == 1:
            if coeffs == [1, 1]:  # t + 1
                out.append(("rational", Fraction(1, 2)))
            continue  # t - 1 (theta=0) or off-circle linear factor
        if not _is_palindromic(coeffs):
            continue  # no unit-circle roots
        n = _cyclotomic_index(f)
        if n is not None:
            for k in range(1, n):
                if sympy.gcd(k, n) == 1:
                    out.append(("rational", Fraction(k, n)))
            continue
        g = _palindromic_reduction(f)
        eps = sympy.Rational(1, 10**12)
        for (a, b), _m in g.intervals(eps=eps):
            a, b = Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))
            if b <= -2 or a >= 2:
                continue
            if a == b and abs(a) >= 2:
                continue
            lo, hi = _theta_interval(a, b)  # theta in (0, 1/2)
            gm = tuple(int(c) for c in g.all_coeffs())
            out.append(("algebraic", gm, (a, b), (lo, hi)))
            out.append(("algebraic", gm, (a, b), (1 - hi, 1 - lo)))
    return out


def signature_function(A: SeifertMatrix) -> SignatureFunction:
    """Exact signature step function of A on (0, 1)."""
    n = A.size
    if n == 0:
        return SignatureFunction((), (0,), A.extra_nullity, (1,))
    delta = alexander_det(A)
    if delta.is_zero:
        # everywhere-singular pencil: jump candidates come from a maximal
        # generically-nonsingular submatrix (a rank drop kills every
        # maximal minor, so its determinant sees every jump)
        sub, generic_defect = _maximal_submatrix_det(A)
        probe = sub
    else:
        probe, generic_defect = delta, 0
    generic_nullity = generic_defect + A.extra_nullity
    data = _unit_circle_data(probe)

    # order the jumps; rationals exactly, algebraics by their intervals
    def key(rec):
        if rec[0] == "rational":
            return rec[1]
        return (rec[3][0] + rec[3][1]) / 2

    data = sorted(set(data), key=key)
    # certified disjointness of consecutive descriptors
    for r1, r2 in zip(data, data[1:]):
        k1 = r1[1] if r1[0] == "rational" else r1[3][1]
        k2 = r2[1] if r2[0] == "rational" else r2[3][0]
        assert k1 < k2, "jump intervals not separated; refine eps"

    # plateau samples strictly between consecutive jumps
    bounds = [Fraction(0)]
    for rec in data:
        if rec[0] == "rational":
            bounds.extend([rec[1], rec[1]])
        else:
            bounds.extend([rec[3][0], rec[3][1]])
    bounds.append(Fraction(1))
    plateaus = []
    samples = []
    for i in range(0, len(bounds), 2):
        lo, hi = bounds[i], bounds[i + 1]
        s = _simplest_between(lo, hi)
        samples.append(s)
        sig, nul = _sig_null_exact(A.entries, _omega(s)) if n else (0, 0)
        assert nul == generic_defect, "plateau sample unexpectedly singular"
        plateaus.append(sig)

    jumps = []
    for i, rec in enumerate(data):
        left, right = plateaus[i], plateaus[i + 1]
        if rec[0] == "rational":
            th = rec[1]
            sig, nul = _sig_null_exact(A.entries, _omega(th))
            xm = sympy.minimal_polynomial(2 * sympy.cos(2 * sympy.pi *
                                                        sympy.Rational(th.numerator, th.denominator)), _x)
            jumps.append(Jump(th, tuple(int(c) for c in sympy.Poly(xm, _x).all_coeffs()),
                              (Fraction(0), Fraction(0)), (th, th),
                              sig, nul + A.extra_nullity, left + right))
        else:
            gm, xint, tint = rec[1], rec[2], rec[3]
            omega0 = _unit_root_of(probe, tint)
            sig, nul = _sig_null_exact(A.entries, omega0)
            jumps.append(Jump(None, gm, xint, tint,
                              sig, nul + A.extra_nullity, left + right))

    return SignatureFunction(tuple(jumps), tuple(plateaus), generic_nullity,
                             tuple(int(c) for c in reversed(delta.all_coeffs())) if not delta.is_zero else ())


def _unit_root_of(probe: sympy.Poly, theta_interval):
    """The root of probe on the unit circle whose angle lies in the
    interval, as an exact CRootOf."""
    lo, hi = theta_interval
    mid = float((lo + hi) / 2)
    target = complex(mpmath.e ** (2j * mpmath.pi * mid))
    best = None
    for fac, _m in sympy.factor_list(probe, _t)[1]:
        fp = sympy.Poly(fac, _t)
        if fp.degree() < 2:
            continue
        for i in range(fp.degree()):
            r = sympy.CRootOf(fp, i)
            d = abs(complex(r.evalf(30)) - target)
            if best is None or d < best[0]:
                best = (d, r)
    assert best is not None and best[0] < 1e-6, "unit root not located"
    return best[1]


def _maximal_submatrix_det(A: SeifertMatrix):
    """(det of a maximal generically-nonsingular submatrix of A - tA^T,
    generic nullity).

    Pivot rows/columns are found by exact rref at generic rational
    values of t (symbolic rref on the pencil is far too slow), and the
    submatrix determinant is recovered by interpolation from exact
    rational evaluations.  A rank drop at an unlucky sample point would
    make the plateau-nullity audit in signature_function fail, so the
    choice is self-checking; several sample points are tried.
    """
    n = A.size

    def pencil_at(tv):
        return sympy.Matrix(
            n, n, lambda i, j: sympy.Rational(A.entries[i][j]) - tv * A.entries[j][i]
        )

    best = None
    for tv in (sympy.Rational(7, 3), sympy.Rational(-5, 7), sympy.Rational(11, 13)):
        M0 = pencil_at(tv)
        _, row_piv = M0.T.rref()
        rows = list(row_piv)
        _, col_piv = M0[rows, :].rref()
        cols = list(col_piv)
        assert len(rows) == len(cols)
        if best is None or len(rows) > len(best[0]):
            best = (rows, cols)
    rows, cols = best
    k = len(rows)
    # det has degree <= k; interpolate from k+1 exact evaluations
    pts = [sympy.Rational(j) for j in range(k + 1)]
    vals = [pencil_at(p)[rows, cols].det(method="bareiss") for p in pts]
    if all(v == 0 for v in vals):
        det = sympy.Poly(0, _t)
    else:
        det = sympy.Poly(sympy.interpolate(list(zip(pts, vals)), _t), _t)
    assert not det.is_zero
    return det, n - k


# ---------------------------------------------------------------------------
# Derived conveniences


def averaged_signature(A: SeifertMatrix, theta: Fraction) -> Fraction:
    """sigma-bar: mean of the one-sided limits; equals sigma off jumps."""
    return Fraction(signature_function(A).sigma_bar_times_2(Fraction(theta)), 2)


def signature_profile_csv(A: SeifertMatrix, resolution: int) -> str:
    """CSV profile: rows at theta = k/resolution for k = 0..resolution-1,
    plus one row per jump (irrational jump angles are reported by the
    simplest rational in their certified isolating interval)."""
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    sf = signature_function(A)
    rows = []
    for k in range(resolution):
        th = Fraction(k, resolution)
        if k == 0:
            rows.append((th, 0, sf.sigma_bar_times_2(th), 0, 0))
        else:
            rows.append((th, sf.sigma(th), sf.sigma_bar_times_2(th),
                         sf.nullity_at(th), int(sf.is_jump(th))))
    for j in sf.jumps:
        th = j.theta if j.theta is not None else _simplest_between(*j.interval)
        rows.append((th, j.sigma, j.averaged_times_2, j.nullity, 1))
    rows.sort(key=lambda r: (r[0], -r[4]))
    out = ["theta_num,theta_den,sigma,sigma_bar_times_2,nullity,is_jump"]
    for th, s, sb2, nu, isj in rows:
        out.append(f"{th.numerator},{th.denominator},{s},{sb2},{nu},{isj}")
    return "\n".join(out) + "\n"


@functools.lru_cache(maxsize=256)
def _sf_for_key(key, entries, extra):
    return signature_function(SeifertMatrix(entries, extra))


def link_signature_function(d: LinkDiagram) -> SignatureFunction:
    """Signature function of a link diagram (cached per diagram key)."""
    M = seifert_matrix(d)
    return _sf_for_key(d.diagram_key(), M.entries, M.extra_nullity)
