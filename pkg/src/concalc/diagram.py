"""Planar link diagrams with oriented PD codes.

A crossing is stored as the 4-tuple of its incident arc labels in
counterclockwise order *starting from the incoming under-strand*, together
with the crossing sign.  The sign determines where the incoming
over-strand sits: slot 3 for a positive crossing, slot 1 for a negative
one.  (Check with the standard positive crossing, both strands pointing
up: walking ccw from the under-strand's entry you meet the over-strand's
exit first.)

Arcs are edges of the 4-valent diagram graph: every arc is incident to
exactly two crossing slots.  Components with no crossings at all are
counted separately in ``free_loops``.

Text form: ``X[a,b,c,d]+`` per crossing, ``O`` per free loop, separated
by single spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .morse import CROSS, CUP, CAP, MorseTangle


@dataclass(frozen=True)
class Crossing:
    arcs: tuple    # (a, b, c, d), ccw from incoming under-strand
    sign: int

    def __post_init__(self):
        if len(self.arcs) != 4:
            raise ValueError("a crossing has four arc slots")
        if self.sign not in (1, -1):
            raise ValueError("crossing sign is +1 or -1")

    @property
    def under_in(self):
        return self.arcs[0]

    @property
    def under_out(self):
        return self.arcs[2]

    @property
    def over_in(self):
        return self.arcs[3] if self.sign > 0 else self.arcs[1]

    @property
    def over_out(self):
        return self.arcs[1] if self.sign > 0 else self.arcs[3]

    def incoming_slots(self):
        return (0, 3) if self.sign > 0 else (0, 1)

    def outgoing_slots(self):
        return (2, 1) if self.sign > 0 else (2, 3)


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple = ()
    free_loops: int = 0

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))
        self._incidence  # validate arcs now

    @cached_property
    def _incidence(self):
        """arc -> list of (crossing index, slot); every arc appears twice."""
        inc = {}
        for ci, x in enumerate(self.crossings):
            for s, a in enumerate(x.arcs):
                inc.setdefault(a, []).append((ci, s))
        for a, ends in inc.items():
            if len(ends) != 2:
                raise ValueError(f"arc {a} has {len(ends)} ends, expected 2")
        return inc

    @cached_property
    def _arc_heads(self):
        """arc -> (crossing, slot) where the arc points into the crossing."""
        heads = {}
        tails = {}
        for ci, x in enumerate(self.crossings):
            for s in x.incoming_slots():
                a = x.arcs[s]
                if a in heads:
                    raise ValueError(f"arc {a} flows into two crossings")
                heads[a] = (ci, s)
            for s in x.outgoing_slots():
                a = x.arcs[s]
                if a in tails:
                    raise ValueError(f"arc {a} flows out of two crossings")
                tails[a] = (ci, s)
        if set(heads) != set(tails):
            raise ValueError("inconsistent arc orientations")
        return heads

    @cached_property
    def components(self):
        """Tuple of components, each a tuple of arcs in traversal order.

        Ordered by smallest arc label; traversal starts at that arc.
        """
        heads = self._arc_heads
        seen = set()
        comps = []
        for a0 in sorted(self._incidence):
            if a0 in seen:
                continue
            cyc = []
            a = a0
            while a not in seen:
                seen.add(a)
                cyc.append(a)
                ci, s = heads[a]
                x = self.crossings[ci]
                a = x.under_out if s == 0 else x.over_out
            comps.append(tuple(cyc))
        return tuple(comps)

    @property
    def n_components(self):
        return len(self.components) + self.free_loops

    @cached_property
    def arc_component(self):
        return {a: i for i, comp in enumerate(self.components) for a in comp}

    def crossing_components(self, ci):
        """(under component, over component) of crossing ci."""
        x = self.crossings[ci]
        ac = self.arc_component
        return ac[x.under_in], ac[x.over_in]

    # -- numerical combinatorial invariants ------------------------------

    def writhe(self):
        return sum(x.sign for x in self.crossings)

    def self_writhe(self, comp):
        total = 0
        for ci, x in enumerate(self.crossings):
            u, o = self.crossing_components(ci)
            if u == comp and o == comp:
                total += x.sign
        return total

    def linking_number(self, i, j):
        """Linking number of components i and j (sweep labels, 0-based)."""
        if i == j:
            raise ValueError("linking number needs two distinct components")
        total = 0
        for ci, x in enumerate(self.crossings):
            u, o = self.crossing_components(ci)
            if {u, o} == {i, j}:
                total += x.sign
        if total % 2:
            raise AssertionError("inter-component crossing signs sum to an odd number")
        return total // 2

    def linking_matrix(self):
        n = self.n_components
        lk = [[0] * n for _ in range(n)]
        for i in range(len(self.components)):
            for j in range(i + 1, len(self.components)):
                lk[i][j] = lk[j][i] = self.linking_number(i, j)
        for i in range(n):
            lk[i][i] = self.self_writhe(i) if i < len(self.components) else 0
        return lk

    # -- diagram operations ----------------------------------------------

    def mirror(self):
        new = []
        for x in self.crossings:
            a, b, c, d = x.arcs
            if x.sign > 0:
                new.append(Crossing((d, a, b, c), -1))
            else:
                new.append(Crossing((b, c, d, a), +1))
        return LinkDiagram(tuple(new), self.free_loops)

    def reverse_component(self, comp):
        """Reverse the orientation of one component; signs are recomputed."""
        if not 0 <= comp < len(self.components):
            if comp < self.n_components:
                return self  # free loop: nothing to do
            raise ValueError(f"no component {comp}")
        new = []
        for ci, x in enumerate(self.crossings):
            u, o = self.crossing_components(ci)
            arcs = x.arcs
            sign = x.sign
            if u == comp:
                arcs = arcs[2:] + arcs[:2]
            if (u == comp) != (o == comp):
                sign = -sign
            new.append(Crossing(arcs, sign))
        return LinkDiagram(tuple(new), self.free_loops)

    def reverse_all(self):
        d = self
        for i in range(len(self.components)):
            d = d.reverse_component(i)
        return d

    def sublink(self, keep):
        """Keep the listed components (0-based labels), erase the rest."""
        keep = sorted(set(keep))
        n_closed = len(self.components)
        for c in keep:
            if not 0 <= c < self.n_components:
                raise ValueError(f"no component {c}")
        kept_free = sum(1 for c in keep if c >= n_closed)
        keep_set = {c for c in keep if c < n_closed}

        parent = {}

        def find(a):
            parent.setdefault(a, a)
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        new = []
        for ci, x in enumerate(self.crossings):
            u, o = self.crossing_components(ci)
            if u in keep_set and o in keep_set:
                new.append(x)
            elif u in keep_set:
                # over-strand erased: weld under-in to under-out
                ra, rb = find(x.under_in), find(x.under_out)
                parent[max(ra, rb)] = min(ra, rb)
            elif o in keep_set:
                ra, rb = find(x.over_in), find(x.over_out)
                parent[max(ra, rb)] = min(ra, rb)
        welded = [
            Crossing(tuple(find(a) for a in x.arcs), x.sign) for x in new
        ]
        # kept components whose crossings all vanished become free loops
        arcs_left = {a for x in welded for a in x.arcs}
        survivors = 0
        for c in keep_set:
            comp_arcs = {find(a) for a in self.components[c]}
            if not (comp_arcs & arcs_left):
                survivors += 1
        return LinkDiagram(tuple(welded), kept_free + survivors)


# -- closures of Morse tangles -------------------------------------------


def closure(t: MorseTangle) -> LinkDiagram:
    """Close a tangle by joining top i to bottom i around the right side.

    For a braid word this is the usual braid closure.  Closed tangles
    (no ends) are converted as they stand.
    """
    sw = t._sweep
    if t.inputs != sw.outputs:
        raise ValueError("closure needs inputs == outputs")
    if t.input_dirs != sw.output_dirs:
        raise ValueError("closure needs matching orientations top and bottom")

    parent = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    next_arc = t.inputs
    strands = [(i, t.input_dirs[i]) for i in range(t.inputs)]  # (arc, dir)
    crossings = []
    cup_idx = 0
    for ev in t.events:
        p = ev.pos
        if ev.kind == CROSS:
            (aL, dL), (aR, dR) = strands[p - 1], strands[p]
            nTL, nTR = next_arc, next_arc + 1
            next_arc += 2
            # ends ccw around the crossing: BL, BR, TR, TL
            end_arc = {"BL": aL, "BR": aR, "TR": nTR, "TL": nTL}
            s = ev.sign
            if s > 0:
                under = ("BR", "TL") if dR > 0 else ("TL", "BR")
            else:
                under = ("BL", "TR") if dL > 0 else ("TR", "BL")
            ccw = ["BL", "BR", "TR", "TL"]
            k = ccw.index(under[0])
            order = ccw[k:] + ccw[:k]
            sign = s * dL * dR
            x = Crossing(tuple(end_arc[e] for e in order), sign)
            assert x.under_in == end_arc[under[0]] and x.under_out == end_arc[under[1]]
            crossings.append(x)
            strands[p - 1], strands[p] = (nTL, dR), (nTR, dL)
        elif ev.kind == CUP:
            a = next_arc
            next_arc += 1
            d = t.cup_dirs[cup_idx]
            cup_idx += 1
            strands[p - 1:p - 1] = [(a, d), (a, -d)]
        else:  # CAP
            (a, _), (b, _) = strands[p - 1], strands[p]
            union(a, b)
            del strands[p - 1:p + 1]
    for i, (a, _) in enumerate(strands):
        union(a, i)

    welded = tuple(
        Crossing(tuple(find(a) for a in x.arcs), x.sign) for x in crossings
    )
    used = {a for x in welded for a in x.arcs}
    # closed pieces that met no crossing are free loops
    all_arcs = {find(a) for a in range(next_arc)}
    loops = len(all_arcs - used)
    return LinkDiagram(welded, loops)


# -- text form -----------------------------------------------------------


def format_pd(d: LinkDiagram) -> str:
    toks = [
        "X[%s]%s" % (",".join(str(a) for a in x.arcs), "+" if x.sign > 0 else "-")
        for x in d.crossings
    ]
    toks.extend(["O"] * d.free_loops)
    return " ".join(toks) if toks else "(empty)"

def parse_pd(text: str) -> LinkDiagram:
    crossings = []
    loops = 0
    text = text.strip()
    if text == "(empty)":
        return LinkDiagram((), 0)
    for tok in text.split():
        if tok == "O":
            loops += 1
            continue
        if not (tok.startswith("X[") and tok[-1] in "+-" and tok[-2] == "]"):
            raise ValueError(f"bad PD token {tok!r}")
        arcs = tuple(int(s) for s in tok[2:-2].split(","))
        crossings.append(Crossing(arcs, 1 if tok[-1] == "+" else -1))
    return LinkDiagram(tuple(crossings), loops)


def relabeled(d: LinkDiagram) -> LinkDiagram:
    """Canonically relabel arcs along components, starting from 1."""
    mapping = {}
    for comp in d.components:
        for a in comp:
            mapping[a] = len(mapping) + 1
    return LinkDiagram(
        tuple(Crossing(tuple(mapping[a] for a in x.arcs), x.sign) for x in d.crossings),
        d.free_loops,
    )


def diagram_key(d: LinkDiagram) -> str:
    """Deterministic identity string for ledger bookkeeping.

    Not an isotopy invariant -- equal strings mean equal diagrams, nothing
    more.
    """
    return format_pd(relabeled(d))
