"""Covering-link calculus on Morse tangles.

A branched cover along an unknotted closure axis is computed by cutting
the companion link open along the axis disk (an ``AxisPresentation``)
and stacking the resulting tangle q times before closing it up again.
Sublink steps, the string-link variants, and the symbolic bookkeeping
for connected summands that leave the cylinder (``AmbientSummand``) are
layered on top, together with the calculus' rewrite rules
(``rule_C_cover``, ``rule_T_cover``, ``rule_Cn_cover``) and an
invariant-level ``crosscheck`` between rule outputs and geometric
stacking.

Covers are only taken along unknotted branch components, so the covered
ambient space is again the 3-sphere and everything stays inside the
diagram layer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import sympy

from .diagram import LinkDiagram, closure
from .invariants import signature_function
from .morse import (
    CROSS,
    CUP,
    MorseTangle,
    cap,
    cross,
    cup,
    format_tangle,
    inverse,
    mirror,
    parse_tangle,
    plat_string,
    product,
    reverse_component_of_strand,
    split_union,
)
from .operators import (
    C_n,
    T_s,
    _twist_block,
    cable,
    ell2,
    shift_events,
    trace_closed,
)
from .seifert import alexander_det, seifert_matrix


def r(t: MorseTangle) -> MorseTangle:
    """String-link reversal: turn the cylinder upside down.

    Realized as mirror of the stacking inverse; the closure of ``r(t)``
    is the reverse of the closure of ``t``.
    """
    return mirror(inverse(t))


# --------------------------------------------------------------------------
# prime powers


def _prime_power_base(q: int):
    """The prime b with q = b**a (a >= 1), or None."""
    if q < 2:
        return None
    f = sympy.factorint(q)
    if len(f) != 1:
        return None
    return next(iter(f))


def check_cover_degree(q: int, p: int | None = None) -> None:
    base = _prime_power_base(q)
    if base is None or (p is not None and base != p):
        want = f"a power of {p}" if p is not None else "a prime power"
        raise ValueError(f"q must be {want}, got {q}")


# --------------------------------------------------------------------------
# axis presentations


@dataclass(frozen=True)
class AxisPresentation:
    """A link cut open along the disk of an unknotted closure axis.

    The presented link is closure(tangle) together with the axis
    unknot; the q-fold cover branched along the axis is the closure of
    the q-fold stack of ``tangle``.  ``branch`` optionally records the
    1-string form of the branch knot for ambient bookkeeping when the
    cover is taken inside a cylinder rather than the sphere.
    """

    tangle: MorseTangle
    origin: str = ""
    branch: MorseTangle | None = None


def stack_tangle(t: MorseTangle, q: int) -> MorseTangle:
    if q < 1:
        raise ValueError("q must be >= 1")
    out = t
    for _ in range(q - 1):
        out = product(out, t)
    return out


def branched_cover(ap: AxisPresentation, q: int, p: int | None = None) -> LinkDiagram:
    """The q-fold cyclic cover branched along the presentation's axis.

    The branch preimage is forgotten; components of the output are the
    lifts of the companion link.
    """
    check_cover_degree(q, p)
    return closure(trace_closed(stack_tangle(ap.tangle, q)))


def with_axis(ap: AxisPresentation) -> LinkDiagram:
    """The presented link itself: closure of the tangle plus the axis."""
    t = ap.tangle
    k = t.inputs
    ring = (
        (cup(k + 1),)
        + tuple(cross(pp, -1) for pp in range(k, 0, -1))
        + tuple(cross(pp, -1) for pp in range(1, k + 1))
        + (cap(k + 1),)
    )
    return closure(
        trace_closed(
            MorseTangle(k, ring + t.events, t.input_dirs, (1,) + t.cup_dirs)
        )
    )


def _writhe(t: MorseTangle) -> int:
    return sum(e.sign for e in t.events if e.kind == CROSS)


def _assert_string_link(t, k=None):
    if not (isinstance(t, MorseTangle) and t.is_string_link()):
        raise ValueError("expected a string link")
    if k is not None and t.inputs != k:
        raise ValueError(f"expected {k} strands, got {t.inputs}")


def _delta_one(d: LinkDiagram) -> bool:
    p = alexander_det(seifert_matrix(d))
    return (not p.is_zero) and abs(p.LC()) == 1 and _canon_poly(p) == sympy.Poly(
        1, sympy.Symbol("t")
    )


def check_unknotted_strands(beta: MorseTangle) -> None:
    """Audit the unknotted-components hypothesis of the rewrite rules.

    Each closure component must have trivial Alexander polynomial; this
    is a necessary condition only, which is all the diagram layer can
    certify.
    """
    d = closure(trace_closed(beta))
    for i in range(d.n_components):
        if not _delta_one(d.sublink([i])):
            raise ValueError(f"closure component {i} is knotted")


def axis_c(beta: MorseTangle, clasp_sign: int = 1) -> AxisPresentation:
    """Axis presentation of the doubled link closure(C(beta)) along its
    ring component.

    Cutting along the ring disk leaves the fold of beta: string 1
    traversed upward, string 2 downward, joined by a cup/cap pair, with
    the two disk passes as the tangle's boundary strands.  The closure
    of the 1-stack is the plat of beta; the q-stack components pair up
    cyclically adjacent copies of the two strings.
    """
    _assert_string_link(beta, 2)
    s1, s2 = (1, -1) if clasp_sign == 1 else (-1, 1)
    body = reverse_component_of_strand(beta, 2)
    evs = (
        (cup(3), cross(2, s1))
        + shift_events(body.events, 1)
        + (cross(2, s2), cap(1))
    )
    return AxisPresentation(
        MorseTangle(2, evs, (1, -1), (1,) + body.cup_dirs),
        origin="C(beta) closure, branched along the ring strand",
    )


def axis_bing(k: MorseTangle) -> AxisPresentation:
    """Axis presentation of the Bing double of a knot along its ring.

    The companion tangle is the out-and-back 2-cable of the knot's
    1-string form with untwisted framing; the 1-stack closes to the
    unknot, and the q-stack components traverse pairs of copies of the
    knot (each lift is a connected sum of the knot and its reverse).
    """
    _assert_string_link(k, 1)
    cab = cable(k, (2,), ((-1, 1),))
    w = _writhe(k)
    evs = (
        (cup(1),)
        + shift_events(cab.events, 1)
        + tuple(_twist_block(2, w))
        + (cap(3),)
    )
    return AxisPresentation(
        MorseTangle(2, evs, (1, -1), (1,) + cab.cup_dirs),
        origin="Bing double, branched along the ring component",
    )


def axis_hopf() -> AxisPresentation:
    """One component of the Hopf link as a single strand through the
    disk of the other."""
    return AxisPresentation(
        MorseTangle(1, (), (1,), ()),
        origin="Hopf link, branched along one component",
    )


_WRAP_BLOCK = (cross(1, 1), cross(2, 1), cross(1, -1))


def axis_t(
    beta: MorseTangle,
    alpha: MorseTangle,
    s: int = 0,
    t: int = 1,
    clasp_sign: int = 1,
) -> AxisPresentation:
    """Axis presentation of the twisted doubling family along the first
    strand's closure.

    The companion is the fold of beta carrying ``alpha``, with the band
    making one extra pass through the axis disk when ``t`` is odd, so
    the q-fold cover of the companion is a single knot.  The ``s``
    parameter is realized as extra clasps of the wrap pass around the
    folded band.

    Validation status (see the covering tests): the 1-stack closure and
    the cover's component structure are exact; for trivial beta with
    ``s == 0`` and odd ``t`` the q-stack reproduces the rewrite rule's
    closure together with q-2 extra copies of alpha.  The remaining
    parameter range is wired by the same pattern but is not certified
    to match the rewrite rule; the crosscheck reports honest mismatches
    there.
    """
    _assert_string_link(beta, 2)
    _assert_string_link(alpha, 1)
    if s < 0 or t < 0:
        raise ValueError("s and t must be >= 0")
    s1, s2 = (1, -1) if clasp_sign == 1 else (-1, 1)
    body = reverse_component_of_strand(beta, 2)
    evs = (
        (cup(3), cross(2, s1))
        + shift_events(alpha.events, 1)
        + shift_events(body.events, 1)
        + (cross(2, s2), cap(1))
    )
    cup_dirs = (1,) + alpha.cup_dirs + body.cup_dirs
    if t % 2 == 0:
        # no extra pass: the companion lifts to q separate components
        return AxisPresentation(
            MorseTangle(2, evs, (1, -1), cup_dirs),
            origin=f"T-form (s={s}, t={t}), branched along the first strand",
            branch=alpha,
        )
    top = (cross(2, s1), cross(2, s1)) * s + _WRAP_BLOCK
    return AxisPresentation(
        MorseTangle(3, evs + top, (1, -1, 1), cup_dirs),
        origin=f"T-form (s={s}, t={t}), branched along the first strand",
        branch=alpha,
    )


# --------------------------------------------------------------------------
# covering steps and traces


@dataclass(frozen=True)
class C1:
    """Pass to a sublink of a closed link."""

    keep: tuple


@dataclass(frozen=True)
class C2:
    """Branched cover of a closed link along the axis of ``axis``."""

    q: int
    axis: AxisPresentation


@dataclass(frozen=True)
class CL1:
    """Pass to a sub-string-link (keep the given strands)."""

    keep: tuple


@dataclass(frozen=True)
class CL2:
    """Branched cover of a string link along the closure of one strand.

    The strand's closure must be exhibited as the stacking axis by
    ``axis``; when the branch knot recorded there is nontrivial, the
    ambient cylinder picks up a symbolic connected summand.
    """

    q: int
    strand: int
    axis: AxisPresentation


@dataclass(frozen=True)
class AmbientSummand:
    """Symbolic q-fold cyclic branched cover of the sphere along a knot,
    split off the ambient space by a covering step."""

    q: int
    knot: MorseTangle

    def is_trivial(self) -> bool:
        return self.knot.crossing_count == 0


@dataclass(frozen=True)
class CoveringTrace:
    steps: tuple

    @property
    def height(self) -> int:
        return sum(1 for s in self.steps if isinstance(s, (C2, CL2)))


def delete_strand_components(t: MorseTangle, drop_strands) -> MorseTangle:
    """Remove every component meeting the given input strands (1-based)."""
    sw = t._sweep
    drop_comps = {sw.seg_component[i - 1] for i in drop_strands}
    keep_inputs = [
        i for i in range(t.inputs) if sw.seg_component[i] not in drop_comps
    ]
    # replay the sweep, tracking keep/drop per live strand
    strands = [sw.seg_component[i] not in drop_comps for i in range(t.inputs)]
    events = []
    cup_dirs = []
    cup_i = 0
    for ev in t.events:
        p = ev.pos
        off = sum(1 for kept in strands[: p - 1] if not kept)
        if ev.kind == CROSS:
            a, b = strands[p - 1], strands[p]
            if a and b:
                events.append(cross(p - off, ev.sign))
            strands[p - 1], strands[p] = b, a
        elif ev.kind == CUP:
            d = t.cup_dirs[cup_i]
            # both new segments belong to the same component
            comp = None
            # find the component of this cup via the sweep's cup registry
            for c, cups in enumerate(sw.component_cups):
                if cup_i in cups:
                    comp = c
                    break
            kept = comp not in drop_comps
            if kept:
                events.append(cup(p - off))
                cup_dirs.append(d)
            strands[p - 1 : p - 1] = [kept, kept]
            cup_i += 1
        else:
            a, b = strands[p - 1], strands[p]
            if a:
                events.append(cap(p - off))
            del strands[p - 1 : p + 1]
    return MorseTangle(
        len(keep_inputs),
        tuple(events),
        tuple(t.input_dirs[i] for i in keep_inputs),
        tuple(cup_dirs),
    )


def run_trace(start, trace: CoveringTrace, p: int | None = None):
    """Apply the steps of a covering trace.

    Returns the resulting link diagram or string link together with the
    accumulated ambient summands.  Branched-cover steps replace the
    current object by the cover of their own axis presentation (the
    presentation is the step's witness that the branch component is an
    unknotted closure axis; the layer cannot verify the isotopy).
    """
    obj = start
    ambient = []
    for step in trace.steps:
        if isinstance(step, C1):
            if isinstance(obj, MorseTangle):
                obj = closure(trace_closed(obj)) if obj.is_closed() else obj
            if not isinstance(obj, LinkDiagram):
                raise ValueError("C1 applies to closed links")
            obj = obj.sublink(list(step.keep))
        elif isinstance(step, CL1):
            if not isinstance(obj, MorseTangle) or not obj.is_string_link():
                raise ValueError("CL1 applies to string links")
            drop = [i for i in range(1, obj.inputs + 1) if i not in step.keep]
            obj = delete_strand_components(obj, drop)
        elif isinstance(step, C2):
            obj = branched_cover(step.axis, step.q, p)
        elif isinstance(step, CL2):
            check_cover_degree(step.q, p)
            obj = branched_cover(step.axis, step.q, p)
            br = step.axis.branch
            if br is not None:
                summand = AmbientSummand(step.q, br)
                if not summand.is_trivial():
                    ambient.append(summand)
        else:
            raise ValueError(f"unknown covering step {step!r}")
    return obj, ambient


# --------------------------------------------------------------------------
# rewrite rules

MIN_RULE_COVER_DEGREE = 5


def _rule_degree(q: int, p: int | None) -> None:
    check_cover_degree(q, p)
    if q < MIN_RULE_COVER_DEGREE:
        raise ValueError(
            f"the height-one rewrite rules need a cover degree >= "
            f"{MIN_RULE_COVER_DEGREE}, got {q}"
        )


def rule_C_cover(beta: MorseTangle, q: int = 5, p: int | None = None) -> LinkDiagram:
    """Height-one covering-link rewrite for the doubled link closure.

    Output: the closure of product(beta, split_union(r(plat(beta)),
    plat(beta))) with the bottom component's orientation reversed.  Its
    invariants match an adjacent pair of lifts in the q-fold cover of
    the ``axis_c`` presentation.
    """
    _assert_string_link(beta, 2)
    _rule_degree(q, p)
    check_unknotted_strands(beta)
    pl = plat_string(beta)
    prod = product(beta, split_union(r(pl), pl))
    return closure(trace_closed(reverse_component_of_strand(prod, 1)))


def rule_T_cover(
    beta: MorseTangle,
    alpha: MorseTangle,
    s: int,
    t: int,
    q: int = 5,
    p: int | None = None,
):
    """Height-one covering-string-link rewrite for the twisted doubling
    family.

    Output: the string link T_{2s+1}(r_{s+t+1}(beta)) *
    ell2(r_{s+t}(plat(beta)) * alpha), where r_k applies the reversal r
    for odd k, plus the ambient summand of the q-fold cover along
    alpha.  Only t mod 2 affects the output.
    """
    _assert_string_link(beta, 2)
    _assert_string_link(alpha, 1)
    if s < 0 or t < 0:
        raise ValueError("s and t must be >= 0")
    _rule_degree(q, p)
    check_unknotted_strands(beta)
    core = r(beta) if (s + t + 1) % 2 else beta
    b1 = T_s(core, 2 * s + 1)
    pl = plat_string(beta)
    a = product(r(pl) if (s + t) % 2 else pl, alpha)
    out = product(b1, ell2(a))
    summand = AmbientSummand(q, alpha)
    ambient = [] if summand.is_trivial() else [summand]
    return out, ambient


def rule_Cn_cover(gamma: MorseTangle, n: int, p: int = 2):
    """Height-n covering-string-link rewrite for iterated doubling.

    Output: the 1-string link gamma * r(gamma) * plat(C_1(gamma)) * ...
    * plat(C_{n-1}(gamma)); the ambient list carries the symbolic
    covers along plat(C_k(gamma)) for the middle steps (degree >= 5)
    and along plat(C_1(gamma)) for the final degree-p step when n >= 2.
    """
    _assert_string_link(gamma, 1)
    if n < 1:
        raise ValueError("n must be >= 1")
    check_cover_degree(p)
    out = product(gamma, r(gamma))
    plats = {}
    for k in range(1, n):
        plats[k] = plat_string(C_n(gamma, k))
        out = product(out, plats[k])
    q_mid = p
    while q_mid < MIN_RULE_COVER_DEGREE:
        q_mid *= p
    ambient = []
    for k in range(2, n):
        ambient.append(AmbientSummand(q_mid, plats[k]))
    if n >= 2:
        ambient.append(AmbientSummand(p, plats[1]))
    ambient = [a for a in ambient if not a.is_trivial()]
    return out, ambient


# --------------------------------------------------------------------------
# invariant profiles and crosschecks


def _canon_poly(pol: sympy.Poly) -> sympy.Poly:
    t = sympy.Symbol("t")
    pol = sympy.Poly(pol.as_expr(), t)
    if pol.is_zero:
        return pol
    # strip units t^k and sign
    coeffs = pol.all_coeffs()
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if coeffs and coeffs[0] < 0:
        coeffs = [-c for c in coeffs]
    return sympy.Poly(coeffs, t)


@dataclass(frozen=True)
class LinkProfile:
    n_components: int
    linking: tuple  # off-diagonal entries, row-major
    components: tuple  # sorted (Alexander, sig plateaus, sig jumps) per comp
    signature_plateaus: tuple  # whole-link
    signature_jumps: tuple  # whole-link jump locations (Fractions)
    alexander_vanishes: bool

    @property
    def component_alexander(self) -> tuple:
        return tuple(c[0] for c in self.components)


def link_profile(d: LinkDiagram) -> LinkProfile:
    lk = d.linking_matrix()
    m = len(lk)
    off = tuple(lk[i][j] for i in range(m) for j in range(m) if i != j)
    comp = []
    for i in range(d.n_components):
        Ai = seifert_matrix(d.sublink([i]))
        sfi = signature_function(Ai)
        comp.append(
            (
                str(_canon_poly(alexander_det(Ai))),
                tuple(sfi.plateaus),
                tuple(j.theta for j in sfi.jumps),
            )
        )
    A = seifert_matrix(d)
    sf = signature_function(A)
    return LinkProfile(
        d.n_components,
        off,
        tuple(sorted(comp)),
        tuple(sf.plateaus),
        tuple(j.theta for j in sf.jumps),
        alexander_det(A).is_zero,
    )


@dataclass(frozen=True)
class CrosscheckReport:
    matches: tuple
    mismatches: tuple
    partial: bool = False

    @property
    def ok(self) -> bool:
        return not self.mismatches


_PROFILE_FIELDS = (
    "n_components",
    "linking",
    "component_alexander",
    "components",
    "signature_plateaus",
    "signature_jumps",
)


def crosscheck(rule_out, geom_out, ambient=()) -> CrosscheckReport:
    """Compare rule and geometric outputs on computable invariants.

    With a nonempty ambient list the whole-link signature data lives in
    a connected sum with the symbolic summands, so only the in-ball
    comparison (component count, linking, per-component Alexander) is
    performed and the report is marked partial.
    """

    def to_diagram(x):
        if isinstance(x, LinkDiagram):
            return x
        return closure(trace_closed(x)) if not x.is_closed() else closure(x)

    da, db = to_diagram(rule_out), to_diagram(geom_out)
    partial = bool([s for s in ambient if not s.is_trivial()])
    matches, mismatches = [], []
    if partial:
        # skip the signature pipeline entirely: only the in-ball fields
        # are compared, and those need no Seifert data
        def off_diag(d):
            lk = d.linking_matrix()
            m = len(lk)
            return tuple(lk[i][j] for i in range(m) for j in range(m) if i != j)

        cheap = (
            ("n_components", da.n_components, db.n_components),
            ("linking", off_diag(da), off_diag(db)),
        )
        for f, va, vb in cheap:
            (matches if va == vb else mismatches).append((f, va, vb))
        return CrosscheckReport(tuple(matches), tuple(mismatches), True)
    a, b = link_profile(da), link_profile(db)
    for f in _PROFILE_FIELDS:
        va, vb = getattr(a, f), getattr(b, f)
        (matches if va == vb else mismatches).append((f, va, vb))
    return CrosscheckReport(tuple(matches), tuple(mismatches), partial)


def product_commutation_check(
    beta1: MorseTangle, beta2: MorseTangle, trace: CoveringTrace, p: int | None = None
) -> CrosscheckReport:
    """Covering a product of string links versus the product of covers.

    Valid when the trace's branch data applies strand-wise; ambient
    lists concatenate.
    """
    whole, amb_whole = run_trace(product(beta1, beta2), trace, p)
    left, amb_left = run_trace(beta1, trace, p)
    right, amb_right = run_trace(beta2, trace, p)
    if isinstance(left, MorseTangle) and isinstance(right, MorseTangle):
        combined = product(left, right)
    else:
        raise ValueError("trace must keep string-link outputs to compare")
    rep = crosscheck(whole, combined, tuple(amb_whole) + tuple(amb_left) + tuple(amb_right))
    amb_ok = sorted(
        (s.q, format_tangle(s.knot)) for s in amb_whole
    ) == sorted((s.q, format_tangle(s.knot)) for s in amb_left + amb_right)
    if not amb_ok:
        rep = CrosscheckReport(
            rep.matches,
            rep.mismatches + (("ambient", tuple(amb_whole), tuple(amb_left + amb_right)),),
            rep.partial,
        )
    return rep


# --------------------------------------------------------------------------
# trace (de)serialization


def trace_to_json(trace: CoveringTrace) -> str:
    def enc_axis(ax: AxisPresentation):
        out = {"tangle": format_tangle(ax.tangle), "origin": ax.origin}
        if ax.branch is not None:
            out["branch"] = format_tangle(ax.branch)
        return out

    steps = []
    for s in trace.steps:
        if isinstance(s, C1):
            steps.append({"kind": "C1", "keep": list(s.keep)})
        elif isinstance(s, CL1):
            steps.append({"kind": "CL1", "keep": list(s.keep)})
        elif isinstance(s, C2):
            steps.append({"kind": "C2", "q": s.q, "axis": enc_axis(s.axis)})
        elif isinstance(s, CL2):
            steps.append(
                {"kind": "CL2", "q": s.q, "strand": s.strand, "axis": enc_axis(s.axis)}
            )
        else:
            raise ValueError(f"unknown step {s!r}")
    return json.dumps({"steps": steps}, indent=2, sort_keys=True)


def trace_from_json(text: str) -> CoveringTrace:
    def dec_axis(d):
        return AxisPresentation(
            parse_tangle(d["tangle"]),
            d.get("origin", ""),
            parse_tangle(d["branch"]) if "branch" in d else None,
        )

    data = json.loads(text)
    steps = []
    for s in data["steps"]:
        kind = s["kind"]
        if kind == "C1":
            steps.append(C1(tuple(s["keep"])))
        elif kind == "CL1":
            steps.append(CL1(tuple(s["keep"])))
        elif kind == "C2":
            steps.append(C2(s["q"], dec_axis(s["axis"])))
        elif kind == "CL2":
            steps.append(CL2(s["q"], s["strand"], dec_axis(s["axis"])))
        else:
            raise ValueError(f"unknown step kind {kind!r}")
    return CoveringTrace(tuple(steps))
