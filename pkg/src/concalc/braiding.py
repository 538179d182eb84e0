"""Braid position via Vogel moves.

Any oriented link diagram can be deformed into a closed braid by repeated
type-II moves along "defect" faces: faces carrying two arcs that belong to
different Seifert circles but induce the same orientation on the face
boundary.  Each move keeps the number of Seifert circles constant; when no
defect face is left, the Seifert circles are coherently nested and the
diagram is a braid closure, which we read off combinatorially.

The planar embedding lives entirely in the crossing rotation data (arcs
ccw from the incoming under-strand), so faces are orbits of
``h -> ccw-next(twin(h))`` over half-edges ``(crossing, slot)``.  With our
conventions those orbits keep the face on the right of the traversal;
the local model used by :func:`r2_push` is drawn accordingly.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .diagram import Crossing, LinkDiagram
from .morse import BraidWord


def half_edges(d: LinkDiagram):
    return [(ci, s) for ci in range(len(d.crossings)) for s in range(4)]


def twin_map(d: LinkDiagram):
    tw = {}
    for ends in d._incidence.values():
        (c1, s1), (c2, s2) = ends
        tw[(c1, s1)] = (c2, s2)
        tw[(c2, s2)] = (c1, s1)
    return tw


def faces(d: LinkDiagram):
    """Faces of the sphere embedding as tuples of half-edges."""
    tw = twin_map(d)
    seen = set()
    out = []
    for h0 in half_edges(d):
        if h0 in seen:
            continue
        orbit = []
        h = h0
        while h not in seen:
            seen.add(h)
            orbit.append(h)
            c, s = tw[h]
            h = (c, (s + 1) % 4)
        out.append(tuple(orbit))
    return out


def euler_characteristic(d: LinkDiagram):
    v = len(d.crossings)
    e = len(d._incidence)
    return v - e + len(faces(d))


def diagram_parts(d: LinkDiagram):
    """Connected parts of the 4-valent graph, as frozensets of arcs.

    Free loops are not included (they carry no arcs).
    """
    parent = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in d.crossings:
        a0 = x.arcs[0]
        for a in x.arcs[1:]:
            ra, rb = find(a0), find(a)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for a in d._incidence:
        groups.setdefault(find(a), set()).add(a)
    return [frozenset(g) for g in groups.values()]


# -- Seifert circles -----------------------------------------------------


def seifert_successor(d: LinkDiagram):
    """Oriented smoothing: arc -> next arc along its Seifert circle."""
    succ = {}
    for x in d.crossings:
        succ[x.under_in] = x.over_out
        succ[x.over_in] = x.under_out
    return succ


def seifert_circles(d: LinkDiagram):
    """Circles as tuples of arcs in traversal order (smallest arc first)."""
    succ = seifert_successor(d)
    seen = set()
    circles = []
    for a0 in sorted(d._incidence):
        if a0 in seen:
            continue
        cyc = []
        a = a0
        while a not in seen:
            seen.add(a)
            cyc.append(a)
            a = succ[a]
        circles.append(tuple(cyc))
    return circles


def _arc_circle(circles):
    return {a: i for i, cyc in enumerate(circles) for a in cyc}


# -- the type-II move ----------------------------------------------------


def _tailness(d: LinkDiagram, h):
    """+1 if half-edge h is the tail of its arc (arc flows away from h)."""
    ci, s = h
    return 1 if s in d.crossings[ci].outgoing_slots() else -1


def r2_push(d: LinkDiagram, h1, h2) -> LinkDiagram:
    """Push the arc at h1 over the arc at h2 through a shared face.

    h1 and h2 are half-edges lying on the same face (or, for a split
    diagram, on faces chosen to be identified).  Returns the diagram with
    the cancelling pair of crossings inserted.
    """
    a1 = d.crossings[h1[0]].arcs[h1[1]]
    a2 = d.crossings[h2[0]].arcs[h2[1]]
    if a1 == a2:
        raise ValueError("cannot push an arc across itself")
    e1 = _tailness(d, h1)
    e2 = _tailness(d, h2)
    return _insert_clasp_free_pair(d, a1, e1, a2, e2)


def _arc_ends(d, a):
    """((tail crossing, slot), (head crossing, slot)) of arc a; None if free."""
    tail = head = None
    for (ci, s) in d._incidence[a]:
        if s in d.crossings[ci].incoming_slots():
            head = (ci, s)
        else:
            tail = (ci, s)
    return tail, head


def _insert_clasp_free_pair(d, a1, e1, a2, e2, a1_is_loop=False, a2_is_loop=False):
    fresh = (max(d._incidence, default=0) + 1) if d._incidence else 1
    edits = {}  # (crossing index, slot) -> new arc

    # a1 splits into west / mid / east pieces (model: a1 along the bottom,
    # face-traversal direction -x; e1=+1 means the arc runs east to west)
    m1 = fresh
    fresh += 1
    if a1_is_loop:
        q_w = q_e = fresh
        fresh += 1
    else:
        f1 = fresh
        fresh += 1
        tail1, head1 = _arc_ends(d, a1)
        if e1 > 0:  # east end is the tail; west piece is fresh
            q_e, q_w = a1, f1
            edits[head1] = f1
        else:
            q_w, q_e = a1, f1
            edits[head1] = f1
    m2 = fresh
    fresh += 1
    if a2_is_loop:
        p_w = p_e = fresh
        fresh += 1
    else:
        f2 = fresh
        fresh += 1
        tail2, head2 = _arc_ends(d, a2)
        if e2 > 0:  # west end is the tail
            p_w, p_e = a2, f2
            edits[head2] = f2
        else:
            p_e, p_w = a2, f2
            edits[head2] = f2

    sign_l = e1 * e2
    if e2 > 0:
        y_l = Crossing((p_w, q_w, m2, m1), sign_l)
        y_r = Crossing((m2, q_e, p_e, m1), -sign_l)
    else:
        y_l = Crossing((m2, m1, p_w, q_w), sign_l)
        y_r = Crossing((p_e, m1, m2, q_e), -sign_l)

    new = []
    for ci, x in enumerate(d.crossings):
        arcs = tuple(edits.get((ci, s), a) for s, a in enumerate(x.arcs))
        new.append(Crossing(arcs, x.sign))
    new.extend([y_l, y_r])
    loops = d.free_loops - (1 if a1_is_loop else 0) - (1 if a2_is_loop else 0)
    return LinkDiagram(tuple(new), loops)


# -- connecting split diagrams -------------------------------------------


def connect_diagram(d: LinkDiagram) -> LinkDiagram:
    """Join split parts with cancelling crossing pairs until connected.

    Each join is a type-II move, so the link type is unchanged.
    """
    while True:
        parts = sorted(diagram_parts(d), key=min)
        if len(parts) + d.free_loops <= 1:
            return d
        if d.free_loops and parts:
            # push a free loop over some arc of the first part
            a2 = min(parts[0])
            h2 = d._incidence[a2][0]
            e2 = _tailness(d, h2)
            d = _insert_clasp_free_pair(d, None, 1, a2, e2, a1_is_loop=True)
        elif d.free_loops >= 2:
            d = _insert_clasp_free_pair(d, None, 1, None, 1,
                                        a1_is_loop=True, a2_is_loop=True)
        else:
            a1, a2 = min(parts[0]), min(parts[1])
            h1 = d._incidence[a1][0]
            h2 = d._incidence[a2][0]
            d = r2_push(d, h1, h2)


# -- Vogel's algorithm ---------------------------------------------------


def find_defect(d: LinkDiagram):
    """A pair of half-edges witnessing a defect face, or None."""
    circ = _arc_circle(seifert_circles(d))
    for face in faces(d):
        by_orientation = {1: {}, -1: {}}
        for h in face:
            ci, s = h
            a = d.crossings[ci].arcs[s]
            e = _tailness(d, h)
            bucket = by_orientation[e]
            c = circ[a]
            if any(c2 != c for c2 in bucket.values()):
                other = next(h2 for h2, c2 in bucket.items() if c2 != c)
                return other, h
            bucket[h] = c
    return None


def braid_position(d: LinkDiagram, max_moves=None) -> LinkDiagram:
    """Apply Vogel moves until no defect face remains."""
    if len(d.crossings) == 0:
        return d
    s = len(seifert_circles(d))
    if max_moves is None:
        max_moves = max(100, 4 * s * s)
    for _ in range(max_moves):
        pair = find_defect(d)
        if pair is None:
            return d
        n_circles = len(seifert_circles(d))
        d = r2_push(d, *pair)
        assert len(seifert_circles(d)) == n_circles
        assert euler_characteristic(d) == 2
    raise RuntimeError(f"braid position not reached after {max_moves} moves")


def _circle_crossing_orders(d, circles):
    """Per circle, the crossings met along it, cyclically, arc-aligned.

    Returns a list over circles; entry i is a list of (arc, crossing index)
    pairs: the crossing sits at the head of that arc.
    """
    head_at = {}
    for ci, x in enumerate(d.crossings):
        head_at[x.under_in] = ci
        head_at[x.over_in] = ci
    return [[(a, head_at[a]) for a in cyc] for cyc in circles]


def read_braid(d: LinkDiagram) -> BraidWord:
    """Read a braid word off a diagram in braid position."""
    if not d.crossings:
        return BraidWord(max(1, d.free_loops))
    if d.free_loops:
        raise ValueError("free loops cannot be part of a braid closure")
    circles = seifert_circles(d)
    circ = _arc_circle(circles)
    n = len(circles)

    # circle adjacency must be a path
    adj = {i: set() for i in range(n)}
    for x in d.crossings:
        cu, co = circ[x.under_in], circ[x.over_in]
        if cu == co:
            raise ValueError("not in braid position: crossing on a single circle")
        adj[cu].add(co)
        adj[co].add(cu)
    ends = sorted(i for i in adj if len(adj[i]) <= 1)
    if n == 1:
        raise ValueError("single Seifert circle cannot carry crossings")
    if not ends or any(len(adj[i]) > 2 for i in adj):
        raise ValueError("not in braid position: circle graph is not a path")
    order = [ends[0]]
    while len(order) < n:
        nxt = [j for j in adj[order[-1]] if len(order) < 2 or j != order[-2]]
        if len(nxt) != 1:
            raise ValueError("not in braid position: circle graph is not a path")
        order.append(nxt[0])
    pos = {c: i for i, c in enumerate(order)}  # strand index, 0-based

    # dual path from beyond the last circle to beyond the first, crossing
    # each circle exactly once: gives one cut arc per circle
    tw = twin_map(d)
    face_list = faces(d)
    face_of = {h: fi for fi, face in enumerate(face_list) for h in face}
    face_circles = [
        {circ[d.crossings[c].arcs[s]] for (c, s) in face} for face in face_list
    ]
    inner = order[-1]
    outer = order[0]
    starts = [fi for fi, cs in enumerate(face_circles) if cs == {inner}]
    # BFS over states (face, k): circles order[k..] already crossed
    prev = {}
    queue = [(fi, n) for fi in starts]
    for st in queue:
        prev[st] = None
    goal = None
    while queue:
        fi, k = queue.pop(0)
        if k == 0:
            if face_circles[fi] == {outer}:
                goal = (fi, k)
                break
            continue
        want = order[k - 1]
        for h in face_list[fi]:
            c, s = h
            a = d.crossings[c].arcs[s]
            if circ[a] != want:
                continue
            fj = face_of[tw[h]]
            key = (fj, k - 1)
            if key not in prev:
                prev[key] = ((fi, k), a)
                queue.append(key)
    if goal is None:
        raise ValueError("no braid axis found: diagram not in braid position")
    cut = {}
    st = goal
    while prev[st] is not None:
        parent, a = prev[st]
        cut[circ[a]] = a
        st = parent

    # linearize each circle's crossings starting just past its cut arc
    orders = _circle_crossing_orders(d, circles)
    succs = {}
    for i, cyc in enumerate(orders):
        k0 = next(j for j, (a, _) in enumerate(cyc) if a == cut[i])
        lin = [ci for _, ci in cyc[k0:] + cyc[:k0]]
        for a, b in zip(lin, lin[1:]):
            succs.setdefault(a, set()).add(b)

    indeg = {ci: 0 for ci in range(len(d.crossings))}
    for a, bs in succs.items():
        for b in bs:
            indeg[b] += 1
    heap = [ci for ci, k in indeg.items() if k == 0]
    heapq.heapify(heap)
    word = []
    while heap:
        ci = heapq.heappop(heap)
        x = d.crossings[ci]
        i = min(pos[circ[x.under_in]], pos[circ[x.over_in]])
        word.append((i + 1) * x.sign)
        for b in succs.get(ci, ()):
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, b)
    if len(word) != len(d.crossings):
        raise ValueError("crossing order around the braid axis is cyclic")
    return BraidWord(n, tuple(word))


def pd_to_braid(d: LinkDiagram) -> BraidWord:
    """Braid word whose closure is the given link (same writhe and signs)."""
    d = connect_diagram(d)
    if not d.crossings:
        return BraidWord(max(1, d.free_loops))
    return read_braid(braid_position(d))
