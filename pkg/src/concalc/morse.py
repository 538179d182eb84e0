"""Morse words for tangles and braids.

A tangle is presented as a sweep from bottom to top.  At every height the
tangle meets a horizontal line in some number of points ("strands"),
numbered 1..w from left to right.  Three kinds of events change the
picture:

* ``X+p`` / ``X-p`` -- the strands at positions p, p+1 cross.  ``+`` means
  the strand entering at position p (the left one) passes *over*; ``-``
  means the right one does.  This is a geometric datum, independent of
  orientations.
* ``Up`` -- a local minimum: two new strands are born at positions p, p+1.
* ``Ap`` -- a local maximum: the strands at positions p, p+1 are joined
  and die.

Orientations are carried by tags: one per input strand (+1 = travelling
upward) and one per cup event (+1 = the left-born strand travels upward).
Everything else -- output orientations, components, validity of caps -- is
derived by sweeping.

String-link convention: a pure tangle with ``inputs == outputs``, every
strand oriented upward, and strand i entering at position i and leaving at
position i.  Braid words embed as string links in the obvious way; the
positive generator i is ``X+i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property


CROSS = "X"
CUP = "U"
CAP = "A"


@dataclass(frozen=True)
class MorseEvent:
    kind: str          # one of CROSS, CUP, CAP
    pos: int           # 1-based position of the left strand involved
    sign: int = 0      # for CROSS only: +1 left-over, -1 right-over

    def __post_init__(self):
        if self.kind not in (CROSS, CUP, CAP):
            raise ValueError(f"bad event kind {self.kind!r}")
        if self.pos < 1:
            raise ValueError("event positions are 1-based")
        if self.kind == CROSS and self.sign not in (+1, -1):
            raise ValueError("crossing needs sign +1 or -1")
        if self.kind != CROSS and self.sign != 0:
            raise ValueError("only crossings carry a sign")


def cross(pos, sign):
    return MorseEvent(CROSS, pos, sign)


def cup(pos):
    return MorseEvent(CUP, pos)


def cap(pos):
    return MorseEvent(CAP, pos)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class _Sweep:
    """Everything derivable from one pass over the events."""
    outputs: int
    output_dirs: tuple
    output_segments: tuple
    n_segments: int
    seg_dirs: tuple            # direction of travel per segment id
    seg_component: tuple       # component label per segment id
    n_components: int
    cap_dirs: tuple            # per Cap event, direction of its left strand
    max_width: int
    input_segments: tuple      # segment id of input i is just i, kept for clarity
    component_inputs: tuple    # tuple of input indices per component
    component_cups: tuple      # tuple of cup-event indices per component


@dataclass(frozen=True)
class MorseTangle:
    inputs: int
    events: tuple = ()
    input_dirs: tuple = None   # +1/-1 per input strand; default all +1
    cup_dirs: tuple = None     # +1/-1 per CUP event; default all +1

    def __post_init__(self):
        events = tuple(self.events)
        object.__setattr__(self, "events", events)
        n_cups = sum(1 for e in events if e.kind == CUP)
        ind = self.input_dirs
        if ind is None:
            ind = (1,) * self.inputs
        cud = self.cup_dirs
        if cud is None:
            cud = (1,) * n_cups
        object.__setattr__(self, "input_dirs", tuple(ind))
        object.__setattr__(self, "cup_dirs", tuple(cud))
        if len(self.input_dirs) != self.inputs:
            raise ValueError("need one orientation tag per input strand")
        if len(self.cup_dirs) != n_cups:
            raise ValueError("need one orientation tag per cup event")
        if any(d not in (1, -1) for d in self.input_dirs + self.cup_dirs):
            raise ValueError("orientation tags are +1 or -1")
        self._sweep  # validate now

    @cached_property
    def _sweep(self) -> _Sweep:
        # strand stack entries: (segment id, direction of travel)
        strands = [(i, self.input_dirs[i]) for i in range(self.inputs)]
        seg_dirs = list(self.input_dirs)
        uf = _UnionFind()
        for i in range(self.inputs):
            uf.add(i)
        seg_input = {i: i for i in range(self.inputs)}
        seg_cup = {}
        cup_idx = 0
        cap_dirs = []
        max_width = self.inputs
        for k, ev in enumerate(self.events):
            p = ev.pos
            if ev.kind == CROSS:
                if p + 1 > len(strands):
                    raise ValueError(f"event {k}: crossing at {p} exceeds width {len(strands)}")
                strands[p - 1], strands[p] = strands[p], strands[p - 1]
            elif ev.kind == CUP:
                if p > len(strands) + 1:
                    raise ValueError(f"event {k}: cup at {p} exceeds width {len(strands)}")
                d = self.cup_dirs[cup_idx]
                a = len(seg_dirs)
                b = a + 1
                seg_dirs.extend([d, -d])
                uf.add(a)
                uf.add(b)
                uf.union(a, b)
                seg_cup[a] = cup_idx
                strands[p - 1:p - 1] = [(a, d), (b, -d)]
                cup_idx += 1
            else:  # CAP
                if p + 1 > len(strands):
                    raise ValueError(f"event {k}: cap at {p} exceeds width {len(strands)}")
                (sa, da), (sb, db) = strands[p - 1], strands[p]
                if da != -db:
                    raise ValueError(f"event {k}: cap joins coherently oriented strands")
                uf.union(sa, sb)
                cap_dirs.append(da)
                del strands[p - 1:p + 1]
            max_width = max(max_width, len(strands))

        roots = sorted({uf.find(s) for s in range(len(seg_dirs))})
        label = {r: i for i, r in enumerate(roots)}
        seg_component = tuple(label[uf.find(s)] for s in range(len(seg_dirs)))
        comp_inputs = [[] for _ in roots]
        comp_cups = [[] for _ in roots]
        for s, c in enumerate(seg_component):
            if s in seg_input:
                comp_inputs[c].append(seg_input[s])
            if s in seg_cup:
                comp_cups[c].append(seg_cup[s])
        return _Sweep(
            outputs=len(strands),
            output_dirs=tuple(d for _, d in strands),
            output_segments=tuple(s for s, _ in strands),
            n_segments=len(seg_dirs),
            seg_dirs=tuple(seg_dirs),
            seg_component=seg_component,
            n_components=len(roots),
            cap_dirs=tuple(cap_dirs),
            max_width=max_width,
            input_segments=tuple(range(self.inputs)),
            component_inputs=tuple(tuple(x) for x in comp_inputs),
            component_cups=tuple(tuple(x) for x in comp_cups),
        )

    # -- derived shape ---------------------------------------------------

    @property
    def outputs(self):
        return self._sweep.outputs

    @property
    def output_dirs(self):
        return self._sweep.output_dirs

    @property
    def n_components(self):
        return self._sweep.n_components

    @property
    def component_labels(self):
        """Component label of every segment, in segment-id order."""
        return self._sweep.seg_component

    @property
    def crossing_count(self):
        return sum(1 for e in self.events if e.kind == CROSS)

    def is_closed(self):
        return self.inputs == 0 and self.outputs == 0

    def is_string_link(self):
        """True if this is a string link: strand i runs bottom-i to top-i, upward."""
        sw = self._sweep
        if self.inputs != sw.outputs:
            return False
        if any(d != 1 for d in self.input_dirs) or any(d != 1 for d in sw.output_dirs):
            return False
        comp = sw.seg_component
        return all(
            comp[sw.output_segments[i]] == comp[i] for i in range(self.inputs)
        )

    # -- constructions ---------------------------------------------------

    def __mul__(self, other):
        return product(self, other)


def product(a: MorseTangle, b: MorseTangle) -> MorseTangle:
    """Stack b on top of a (a happens first)."""
    if a.outputs != b.inputs:
        raise ValueError(f"cannot stack: {a.outputs} outputs onto {b.inputs} inputs")
    if a.output_dirs != b.input_dirs:
        raise ValueError("cannot stack: orientations at the interface disagree")
    return MorseTangle(
        inputs=a.inputs,
        events=a.events + b.events,
        input_dirs=a.input_dirs,
        cup_dirs=a.cup_dirs + b.cup_dirs,
    )


def inverse(t: MorseTangle) -> MorseTangle:
    """Flip the tangle upside down and re-orient so strands keep their direction.

    For a braid word this is the group inverse: reversed word, flipped signs.
    """
    sw = t._sweep
    events = []
    cup_dirs = []
    cap_at = list(sw.cap_dirs)
    for ev in reversed(t.events):
        if ev.kind == CROSS:
            events.append(cross(ev.pos, -ev.sign))
        elif ev.kind == CUP:
            events.append(cap(ev.pos))
        else:
            events.append(cup(ev.pos))
            cup_dirs.append(cap_at.pop())
    return MorseTangle(
        inputs=sw.outputs,
        events=tuple(events),
        input_dirs=sw.output_dirs,
        cup_dirs=tuple(cup_dirs),
    )


def reverse_r(t: MorseTangle) -> MorseTangle:
    """Reverse the orientation of every component (the operation r)."""
    return MorseTangle(
        inputs=t.inputs,
        events=t.events,
        input_dirs=tuple(-d for d in t.input_dirs),
        cup_dirs=tuple(-d for d in t.cup_dirs),
    )


def mirror(t: MorseTangle) -> MorseTangle:
    """Mirror image: every crossing changes which strand is on top."""
    return MorseTangle(
        inputs=t.inputs,
        events=tuple(
            cross(e.pos, -e.sign) if e.kind == CROSS else e for e in t.events
        ),
        input_dirs=t.input_dirs,
        cup_dirs=t.cup_dirs,
    )


def split_union(a: MorseTangle, b: MorseTangle) -> MorseTangle:
    """Disjoint union with a's strands to the left of b's.

    In the pictures-read-sideways convention this places a's components
    below b's, so split_union(J1, J2) is the split link with J1 first.
    """
    shift = a.outputs
    events = list(a.events)
    for ev in b.events:
        events.append(MorseEvent(ev.kind, ev.pos + shift, ev.sign))
    return MorseTangle(
        inputs=a.inputs + b.inputs,
        events=tuple(events),
        input_dirs=a.input_dirs + b.input_dirs,
        cup_dirs=a.cup_dirs + b.cup_dirs,
    )


def reverse_component(t: MorseTangle, comp: int) -> MorseTangle:
    """Reverse the orientation of a single component (by sweep label)."""
    sw = t._sweep
    if not 0 <= comp < sw.n_components:
        raise ValueError(f"no component {comp}")
    in_flip = set(sw.component_inputs[comp])
    cup_flip = set(sw.component_cups[comp])
    return MorseTangle(
        inputs=t.inputs,
        events=t.events,
        input_dirs=tuple(-d if i in in_flip else d for i, d in enumerate(t.input_dirs)),
        cup_dirs=tuple(-d if i in cup_flip else d for i, d in enumerate(t.cup_dirs)),
    )


# -- braid words ---------------------------------------------------------


@dataclass(frozen=True)
class BraidWord:
    strands: int
    word: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        if self.strands < 1:
            raise ValueError("a braid has at least one strand")
        for x in self.word:
            if not isinstance(x, int) or x == 0 or abs(x) >= self.strands:
                raise ValueError(f"bad braid letter {x!r} on {self.strands} strands")

    def to_tangle(self) -> MorseTangle:
        return MorseTangle(
            inputs=self.strands,
            events=tuple(cross(abs(x), 1 if x > 0 else -1) for x in self.word),
        )

    def __mul__(self, other):
        if self.strands != other.strands:
            raise ValueError("braid product needs equal strand counts")
        return BraidWord(self.strands, self.word + other.word)

    def inverse(self):
        return BraidWord(self.strands, tuple(-x for x in reversed(self.word)))

    def permutation(self):
        """perm[i] = top position reached by the strand entering at bottom i."""
        perm = list(range(self.strands))
        pos = list(range(self.strands))  # pos[strand] = current position
        for x in self.word:
            p = abs(x) - 1
            a = pos.index(p)
            b = pos.index(p + 1)
            pos[a], pos[b] = pos[b], pos[a]
        return tuple(pos)

    def writhe(self):
        return sum(1 if x > 0 else -1 for x in self.word)


def parse_braid(text: str) -> BraidWord:
    """Parse ``"3; 1 -2 1 -2"``: strand count, semicolon, letters."""
    head, _, tail = text.partition(";")
    if not _:
        raise ValueError("braid text needs a ';' after the strand count")
    try:
        strands = int(head.strip())
    except ValueError:
        raise ValueError(f"bad strand count {head.strip()!r}") from None
    word = []
    for tok in tail.split():
        try:
            word.append(int(tok))
        except ValueError:
            raise ValueError(f"bad braid letter {tok!r}") from None
    return BraidWord(strands, tuple(word))


def format_braid(b: BraidWord) -> str:
    if not b.word:
        return f"{b.strands};"
    return f"{b.strands}; " + " ".join(str(x) for x in b.word)


# -- tangle text form ----------------------------------------------------


def format_event(e: MorseEvent) -> str:
    if e.kind == CROSS:
        return f"X{'+' if e.sign > 0 else '-'}{e.pos}"
    return f"{e.kind}{e.pos}"


def _dirs_str(dirs):
    return "".join("+" if d > 0 else "-" for d in dirs)


def format_tangle(t: MorseTangle) -> str:
    """Canonical one-line form, e.g. ``in=2 out=2; X+1 U2; up=++ cup=+``."""
    ev = " ".join(format_event(e) for e in t.events)
    return (
        f"in={t.inputs} out={t.outputs}; {ev}; "
        f"up={_dirs_str(t.input_dirs)} cup={_dirs_str(t.cup_dirs)}"
    )


def parse_tangle(text: str) -> MorseTangle:
    parts = text.split(";")
    if len(parts) != 3:
        raise ValueError("tangle text has three ';'-separated fields")
    head, evs, tail = parts
    fields = dict(tok.split("=", 1) for tok in head.split())
    inputs = int(fields["in"])
    declared_out = int(fields["out"])
    events = []
    for tok in evs.split():
        kind = tok[0]
        if kind == CROSS:
            if tok[1] not in "+-":
                raise ValueError(f"bad crossing token {tok!r}")
            events.append(cross(int(tok[2:]), 1 if tok[1] == "+" else -1))
        elif kind in (CUP, CAP):
            events.append(MorseEvent(kind, int(tok[1:])))
        else:
            raise ValueError(f"bad event token {tok!r}")
    tail_fields = dict(tok.split("=", 1) for tok in tail.split())
    up = tuple(1 if c == "+" else -1 for c in tail_fields.get("up", ""))
    cups = tuple(1 if c == "+" else -1 for c in tail_fields.get("cup", ""))
    t = MorseTangle(inputs, tuple(events), up, cups)
    if t.outputs != declared_out:
        raise ValueError(f"tangle text declares out={declared_out}, sweep gives {t.outputs}")
    return t


# -- plat closures -------------------------------------------------------


def plat_closed(t: MorseTangle) -> MorseTangle:
    """Close a 2-strand tangle by caps at both ends, giving a closed tangle.

    The bottom pair is joined by a cup below, the top pair by a cap above;
    the second strand is traversed against its string-link direction.
    """
    if t.inputs != 2 or t.outputs != 2:
        raise ValueError("plat closure needs a 2-strand tangle")
    body = reverse_component_of_strand(t, 2) if t.input_dirs == (1, 1) else t
    if body.input_dirs[0] != -body.input_dirs[1]:
        raise ValueError("plat closure needs anti-parallel strands")
    d = body.input_dirs[0]
    events = (cup(1),) + body.events + (cap(1),)
    return MorseTangle(0, events, (), (d,) + body.cup_dirs)


def reverse_component_of_strand(t: MorseTangle, strand: int) -> MorseTangle:
    """Reverse the component containing input strand ``strand`` (1-based)."""
    comp = t._sweep.seg_component[strand - 1]
    return reverse_component(t, comp)


def plat_string(t: MorseTangle) -> MorseTangle:
    """Open plat closure: a 1-string link traversing strand 1 up, strand 2 down.

    The top ends of t are joined by a cap; the bottom end of strand 2 is
    pulled around (through a cup on the right) back up to the top.  The
    result is a string link on one strand whose closure is plat_closed(t).
    """
    if t.inputs != 2 or t.outputs != 2:
        raise ValueError("plat closure needs a 2-strand tangle")
    if t.input_dirs != (1, 1):
        raise ValueError("plat_string expects a string link")
    # width 1 -> cup at 2 -> [in, u, v]; t acts on positions 1..2; cap joins
    # t's two top ends; v runs up to the single output.
    body = reverse_component_of_strand(t, 2)
    events = (cup(2),) + body.events + (cap(1),)
    return MorseTangle(1, events, (1,), (-1,) + body.cup_dirs)
