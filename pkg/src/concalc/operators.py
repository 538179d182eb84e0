"""Satellite and doubling operators on Morse tangles.

All constructions go through one cable engine: every component of a tangle
is replaced by ``w`` blackboard-parallel copies carrying an orientation
pattern (``+1`` = copy parallel to the companion, ``-1`` = antiparallel).
Crossings blow up into bundle transpositions with the same geometric sign,
cups into nested cups, caps into inner-first cap chains.  Copies are
numbered left to right where the companion travels upward and right to
left where it travels downward, which is what makes the nested cup/cap
bookkeeping close up.

Doubling operators insert a fixed splice block into the doubled pair:

* Bing:  the two copies are joined into a single "tongue" by a cap (tip)
  and a cup (neck) at the splice site, and a small ring is added which
  passes between one strand of each copy there.  The ring cannot slide off
  either rounded end, the tongue retracts to an unknot, and the pairwise
  linking number is zero.  Correctness is pinned by invariant tests
  (doubling the unknot gives unlink invariants; every component has
  trivial Alexander polynomial) and, decisively, by the branched-cover
  tests in the covering module: the double cover along the ring turns the
  tongue into copies of K # K^r.
* Whitehead: the copies are joined the same way but clasp each other
  instead of picking up a ring; the clasp sign is the *oriented* sign of
  the two clasp crossings.

Framing is always corrected: the blackboard double of a component with
self-writhe w picks up w full twists, cancelled by 2|w| crossings of the
opposite geometric sign inserted at the splice site.
"""

from __future__ import annotations

from dataclasses import dataclass

from .braiding import pd_to_braid
from .diagram import LinkDiagram, closure
from .morse import (
    CAP,
    CROSS,
    CUP,
    MorseEvent,
    MorseTangle,
    cap,
    cross,
    cup,
    reverse_component_of_strand,
    split_union,
)


def _sgn(x):
    return (x > 0) - (x < 0)


# -- closed forms ----------------------------------------------------------


def trace_closed(t: MorseTangle) -> MorseTangle:
    """The trace closure of a tangle as a *closed* Morse tangle.

    Strand i's top end is joined to its own bottom end around the right:
    nested cups below feed the tangle on the left halves, and descending
    caps above join the outputs to the return strands.
    """
    sw = t._sweep
    if t.inputs != sw.outputs or t.input_dirs != sw.output_dirs:
        raise ValueError("trace closure needs matching ends and orientations")
    k = t.inputs
    cups = tuple(cup(j) for j in range(1, k + 1))
    caps = tuple(cap(j) for j in range(k, 0, -1))
    return MorseTangle(0, cups + t.events + caps, (), t.input_dirs + t.cup_dirs)


def trace_close_strands(t: MorseTangle, keep: int) -> MorseTangle:
    """Close strands keep+1..k of a tangle by trace arcs around the
    right, leaving a tangle on the first ``keep`` strands.

    The input needs k upward bottom ends and k upward top ends (braids
    qualify); whether the result is a string link depends on how the
    closure arcs connect the strands, so that is checked on the output.
    """
    k = t.inputs
    sw = t._sweep
    if sw.outputs != k or any(d != 1 for d in t.input_dirs + sw.output_dirs):
        raise ValueError("expected k upward-through strands")
    if not 0 <= keep <= k:
        raise ValueError("keep out of range")
    cups = tuple(cup(j) for j in range(keep + 1, k + 1))
    caps = tuple(cap(j) for j in range(k, keep, -1))
    out = MorseTangle(
        keep,
        cups + t.events + caps,
        (1,) * keep,
        (1,) * (k - keep) + t.cup_dirs,
    )
    if not out.is_string_link():
        raise ValueError("closure arcs do not leave a string link")
    return out


def to_closed_tangle(x) -> MorseTangle:
    """Closed Morse tangle of a link given as a diagram or tangle.

    Diagrams are braided first (Vogel), so component labels of the result
    follow the braid closure's sweep order, not the diagram's arc order.
    """
    if isinstance(x, MorseTangle):
        if not x.is_closed():
            return trace_closed(x)
        return x
    return trace_closed(pd_to_braid(x).to_tangle())


def component_writhes(t: MorseTangle):
    """Self-writhe (sum of oriented self-crossing signs) per component."""
    sw = t._sweep
    comp = sw.seg_component
    strands = [(i, t.input_dirs[i]) for i in range(t.inputs)]
    seg = t.inputs
    cup_i = 0
    wr = [0] * sw.n_components
    for ev in t.events:
        p = ev.pos
        if ev.kind == CROSS:
            (sa, da), (sb, db) = strands[p - 1], strands[p]
            if comp[sa] == comp[sb]:
                wr[comp[sa]] += ev.sign * da * db
            strands[p - 1], strands[p] = strands[p], strands[p - 1]
        elif ev.kind == CUP:
            d = t.cup_dirs[cup_i]
            strands[p - 1:p - 1] = [(seg, d), (seg + 1, -d)]
            seg += 2
            cup_i += 1
        else:
            del strands[p - 1:p + 1]
    return tuple(wr)


def shift_events(events, k):
    return tuple(MorseEvent(e.kind, e.pos + k, e.sign) for e in events)


# -- the cable engine ------------------------------------------------------


def cable(t: MorseTangle, widths, patterns, inserts=None):
    """Replace component c by widths[c] parallel copies with copy
    orientations patterns[c].

    ``inserts`` optionally maps a component label to a callable
    ``f(base_position) -> (events, cup_dirs)`` whose block is emitted right
    after that component's first cup group (the block must preserve the
    width and the orientation interface of the bundle).
    """
    sw = t._sweep
    comp = sw.seg_component
    if len(widths) != sw.n_components or len(patterns) != sw.n_components:
        raise ValueError("need one width and one pattern per component")
    for c in range(sw.n_components):
        if len(patterns[c]) != widths[c]:
            raise ValueError(f"pattern length != width for component {c}")

    slots = [(i, t.input_dirs[i]) for i in range(t.inputs)]
    seg = t.inputs
    cup_i = 0
    events = []
    cup_dirs = []
    done = set()

    def width_of(slot):
        return widths[comp[slot[0]]]

    def base(p):
        return 1 + sum(width_of(s) for s in slots[:p - 1])

    new_inputs = []
    for i in range(t.inputs):
        c = comp[i]
        w, eps = widths[c], patterns[c]
        D = t.input_dirs[i]
        ks = range(w) if D == 1 else range(w - 1, -1, -1)
        new_inputs.extend(eps[k] * D for k in ks)

    for ev in t.events:
        p = ev.pos
        if ev.kind == CROSS:
            a, b = width_of(slots[p - 1]), width_of(slots[p])
            P = base(p)
            for i in range(a - 1, -1, -1):
                for j in range(b):
                    events.append(cross(P + i + j, ev.sign))
            slots[p - 1], slots[p] = slots[p], slots[p - 1]
        elif ev.kind == CUP:
            c = comp[seg]
            w, eps = widths[c], patterns[c]
            d = t.cup_dirs[cup_i]
            P = base(p)
            events.extend(cup(P + j) for j in range(w))
            if d == 1:
                cup_dirs.extend(eps[j] for j in range(w))
            else:
                cup_dirs.extend(-eps[w - 1 - j] for j in range(w))
            slots[p - 1:p - 1] = [(seg, d), (seg + 1, -d)]
            seg += 2
            cup_i += 1
            if inserts and c in inserts and c not in done:
                done.add(c)
                evs, cds = inserts[c](P)
                events.extend(evs)
                cup_dirs.extend(cds)
        else:  # CAP
            w = width_of(slots[p - 1])
            if w != width_of(slots[p]):
                raise ValueError("cap joins bundles of different widths")
            P = base(p)
            events.extend(cap(P + w - 1 - j) for j in range(w))
            del slots[p - 1:p + 1]

    return MorseTangle(len(new_inputs), tuple(events), tuple(new_inputs), tuple(cup_dirs))


# -- splice blocks ---------------------------------------------------------


def _twist_block(base, writhe):
    """2|w| crossings undoing w blackboard full twists of the pair at base."""
    if writhe == 0:
        return []
    return [cross(base, -_sgn(writhe))] * (2 * abs(writhe))


def _bing_block(base, writhe, clasp_sign):
    """Framing twists, then the Bing splice for a pair at (base, base+1).

    The pair arrives as (A up, B down).  A cup creates the continuing pair
    (A', B'), a ring is woven around (B, A') -- over both on the way in,
    under both on the way back -- and a cap joins (A, B) into the tongue.
    """
    p = base
    s = -clasp_sign
    events = _twist_block(p, writhe) + [
        cup(p + 2),
        cup(p + 3),
        cross(p + 2, s),
        cross(p + 1, s),
        cross(p + 1, s),
        cross(p + 2, s),
        cap(p + 3),
        cap(p),
    ]
    return events, (1, 1)


def _wh_block(base, writhe, clasp_geom_sign):
    """Framing twists, then the Whitehead splice: the pair clasps itself
    (two crossings of geometric sign s, i.e. oriented sign -s on the
    antiparallel pair), then tip cap and neck cup."""
    p = base
    s = clasp_geom_sign
    events = _twist_block(p, writhe) + [
        cross(p, s),
        cross(p, s),
        cap(p),
        cup(p),
    ]
    return events, (1,)


# -- doubling operators on closed tangles ----------------------------------


def _double_with_map(t: MorseTangle, comps, block, clasp_sign):
    """Cable the chosen components to width 2 (antiparallel) and insert a
    splice block; return (tangle, mapping).

    mapping[c] is (tongue_label, ring_label) for doubled c (ring_label is
    None for Whitehead splices) and a plain new label otherwise.
    """
    sw = t._sweep
    n = sw.n_components
    comps = set(range(n)) if comps is None else set(comps)
    for c in comps:
        if not 0 <= c < n:
            raise ValueError(f"no component {c}")
        if not sw.component_cups[c]:
            raise ValueError(f"component {c} has no cup to splice at")
    widths = tuple(2 if c in comps else 1 for c in range(n))
    patterns = tuple((1, -1) if c in comps else (1,) for c in range(n))
    wr = component_writhes(t)
    inserts = {c: (lambda P, c=c: block(P, wr[c], clasp_sign)) for c in comps}

    # predict emitted cup indices to find the new labels afterwards
    first_cup = {}  # old comp -> emitted index of its first cup's first copy
    ring_cup = {}   # doubled comp -> emitted index of the splice's ring cup
    cup_to_old = []
    idx = 0
    old_cup_comp = [None] * len(t.cup_dirs)
    for c in range(n):
        for k in sw.component_cups[c]:
            old_cup_comp[k] = c
    seen = set()
    for k, c in enumerate(old_cup_comp):
        w = widths[c]
        if c not in first_cup:
            first_cup[c] = idx
        idx += w
        if c in comps and c not in seen:
            seen.add(c)
            _evs, cds = block(1, wr[c], clasp_sign)
            # block cup order: pair-continuation cup(s) first, ring cup last
            if len(cds) == 2:
                ring_cup[c] = idx + 1
            idx += len(cds)

    out = cable(t, widths, patterns, inserts)
    cup_comp = {}
    for lab, ks in enumerate(out._sweep.component_cups):
        for k in ks:
            cup_comp[k] = lab
    mapping = {}
    for c in range(n):
        if c in comps:
            mapping[c] = (cup_comp[first_cup[c]], cup_comp.get(ring_cup.get(c, -1)))
        else:
            mapping[c] = cup_comp[first_cup[c]]
    return out, mapping


def bing(t: MorseTangle, comps=None, clasp_sign=1) -> MorseTangle:
    """Bing double the chosen components (default: all) of a closed tangle."""
    out, _ = _double_with_map(t, comps, _bing_block, clasp_sign)
    return out


def bing_double(x, i=None, clasp_sign=1):
    """Bing double component i (default: all components).

    Diagrams come back as diagrams (braided first; see to_closed_tangle
    for the component-label caveat), tangles as closed tangles.
    """
    t = to_closed_tangle(x)
    out = bing(t, None if i is None else [i], clasp_sign)
    return closure(out) if isinstance(x, LinkDiagram) else out


def whitehead_plus(x, comps=None):
    """Positive untwisted Whitehead double of every chosen component."""
    t = to_closed_tangle(x)
    out, _ = _double_with_map(t, comps, _wh_block, -1)
    return closure(out) if isinstance(x, LinkDiagram) else out


def whitehead_minus(x, comps=None):
    t = to_closed_tangle(x)
    out, _ = _double_with_map(t, comps, _wh_block, +1)
    return closure(out) if isinstance(x, LinkDiagram) else out


def cable2_untwisted(x, i):
    """Replace component i by two untwisted (0-framed) parallel copies."""
    t = to_closed_tangle(x)
    n = t.n_components
    if not 0 <= i < n:
        raise ValueError(f"no component {i}")
    widths = tuple(2 if c == i else 1 for c in range(n))
    patterns = tuple((1, 1) if c == i else (1,) for c in range(n))
    wr = component_writhes(t)
    inserts = {i: (lambda P: (_twist_block(P, wr[i]), ()))}
    out = cable(t, widths, patterns, inserts)
    return closure(out) if isinstance(x, LinkDiagram) else out


def iterated_bing(x, n, clasp_sign=1):
    """B_n: Bing double every component, n times."""
    if n < 0:
        raise ValueError("n must be >= 0")
    t = to_closed_tangle(x)
    for _ in range(n):
        t = bing(t, None, clasp_sign)
    return closure(t) if isinstance(x, LinkDiagram) else t


# -- binary trees ----------------------------------------------------------


@dataclass(frozen=True)
class BinaryTree:
    left: "BinaryTree" = None
    right: "BinaryTree" = None

    def __post_init__(self):
        if (self.left is None) != (self.right is None):
            raise ValueError("a node has zero or two children")

    @property
    def is_leaf(self):
        return self.left is None

    @property
    def leaves(self):
        return 1 if self.is_leaf else self.left.leaves + self.right.leaves

    @property
    def order(self):
        """o(T): number of leaves minus one."""
        return self.leaves - 1

    @property
    def depth(self):
        return 0 if self.is_leaf else 1 + max(self.left.depth, self.right.depth)


def complete_tree(n: int) -> BinaryTree:
    if n == 0:
        return BinaryTree()
    sub = complete_tree(n - 1)
    return BinaryTree(sub, sub)


def parse_tree(text: str) -> BinaryTree:
    """Parse balanced-parenthesis trees: ``.`` is a leaf, ``(AB)`` a node."""
    pos = 0

    def rec():
        nonlocal pos
        if pos >= len(text):
            raise ValueError("unexpected end of tree text")
        ch = text[pos]
        if ch == ".":
            pos += 1
            return BinaryTree()
        if ch != "(":
            raise ValueError(f"bad tree character {ch!r} at {pos}")
        pos += 1
        left = rec()
        right = rec()
        if pos >= len(text) or text[pos] != ")":
            raise ValueError(f"expected ')' at {pos}")
        pos += 1
        return BinaryTree(left, right)

    out = rec()
    if pos != len(text):
        raise ValueError("trailing characters after tree")
    return out


def format_tree(tree: BinaryTree) -> str:
    if tree.is_leaf:
        return "."
    return f"({format_tree(tree.left)}{format_tree(tree.right)})"


def tree_bing(x, tree: BinaryTree, clasp_sign=1):
    """Tree-indexed iterated Bing double of a knot.

    Proceeds level by level, doubling every frontier component whose tree
    node is internal in one simultaneous pass, so the complete depth-n tree
    reproduces iterated_bing(x, n) event for event.
    """
    t = to_closed_tangle(x)
    if t.n_components != 1:
        raise ValueError("tree_bing expects a knot")
    frontier = [(0, tree)]
    while any(not node.is_leaf for _, node in frontier):
        targets = [c for c, node in frontier if not node.is_leaf]
        t, m = _double_with_map(t, targets, _bing_block, clasp_sign)
        new = []
        for c, node in frontier:
            if node.is_leaf:
                new.append((m[c], node))
            else:
                tongue, ring = m[c]
                new.append((tongue, node.left))
                new.append((ring, node.right))
        frontier = new
    return closure(t) if isinstance(x, LinkDiagram) else t


# -- string-link operators -------------------------------------------------


def _string_link_check(t, k=None):
    if not t.is_string_link():
        raise ValueError("expected a string link")
    if k is not None and t.inputs != k:
        raise ValueError(f"expected a {k}-string link")


def C_knot(beta: MorseTangle, clasp_sign=1) -> MorseTangle:
    """The doubling 2-string link of a knot given as a 1-string link.

    Strand 1 is plain; strand 2 throws an out-and-back excursion through
    the untwisted 2-cable of beta, passing between the two copies near the
    neck and near the tip of the excursion (over the parallel copy, under
    the antiparallel one), so that the closure is the Bing double of the
    closure of beta.
    """
    _string_link_check(beta, 1)
    cab = cable(beta, (2,), ((1, -1),))
    w = component_writhes(beta)[0]
    cl = clasp_sign
    events = (
        (cup(3), cross(1, +cl), cross(2, -cl))
        + cab.events
        + tuple(_twist_block(1, w))
        + (cross(2, +cl), cross(1, -cl), cap(2))
    )
    return MorseTangle(2, events, (1, 1), (-1,) + cab.cup_dirs)


def C_link(gamma: MorseTangle, clasp_sign=1) -> MorseTangle:
    """The doubling 2-string link of a 2-string link.

    Strand 2 of the output is the *fold* of gamma: it enters string 1
    from below, and the two strings are joined at top and bottom so the
    fold traverses string 1 forward and string 2 backward -- its closure
    is the plat closure of gamma.  Strand 1 of the output is a ring
    woven around the folded pair near the bottom joint, the same pass a
    Bing ring makes: the fold runs through the ring once in each
    direction, so the pairwise linking number is zero, and both strands
    of the output are unknotted.

    For gamma with a trivial fold the closure is unlink-like (vanishing
    one-variable Alexander polynomial and signatures), while a clasp in
    gamma makes the closure Whitehead-like; correctness is pinned by the
    branched-cover crosschecks in the covering module, whose axis
    presentation this tangle is the cut-open form of.

    ``clasp_sign`` flips the ring weave and the joint crossings, giving
    the two mirror conventions for the splice.
    """
    _string_link_check(gamma, 2)
    cl = clasp_sign
    fold = reverse_component_of_strand(gamma, 2)
    events = (
        # ring: a cup whose left arm wraps the (future) folded pair
        (cup(2), cross(3, 1),
         cross(2, cl), cross(1, cl), cross(1, cl), cross(2, cl),
         # bottom joint of the fold, crossing under the ring's return arm
         cup(2), cross(3, cl))
        # gamma with string 2 reversed, on the folded pair
        + shift_events(fold.events, 1)
        # top joint of the fold, and the ring's return arm
        + (cross(2, cl), cap(1), cross(3, -1), cap(2))
    )
    return MorseTangle(2, events, (1, 1), (-1, 1) + fold.cup_dirs)


def C_n(beta: MorseTangle, n: int, clasp_sign=1) -> MorseTangle:
    """Iterated doubling: C_0 = identity, C_1 = C_knot, C_{k+1} = C_link∘C_k."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return beta
    t = C_knot(beta, clasp_sign)
    for _ in range(n - 1):
        t = C_link(t, clasp_sign)
    return t


def T_s(beta: MorseTangle, s: int) -> MorseTangle:
    """Prepend s positive crossings across the two strands."""
    _string_link_check(beta, 2)
    if s < 0:
        raise ValueError("s must be >= 0")
    return MorseTangle(
        2,
        tuple(cross(1, 1) for _ in range(s)) + beta.events,
        beta.input_dirs,
        beta.cup_dirs,
    )


def ell2(alpha: MorseTangle) -> MorseTangle:
    """Split union of two copies of a 1-string link."""
    _string_link_check(alpha, 1)
    return split_union(alpha, alpha)
