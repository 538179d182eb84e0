"""Seifert matrices of braid closures, with congruence compression.

The surface is the standard one for a braid closure: one disk per strand,
one twisted band per letter.  A basis of first homology has one cycle per
pair of *consecutive* occurrences of the same generator: the cycle runs up
between the two bands and closes off through them.  The Seifert linking
numbers of these cycles reduce to a small set of local constants:

* a cycle with band signs ``e1, e2`` self-links ``-(e1 + e2) / 2``;
* consecutive cycles on the same generator share a band of sign ``e`` and
  contribute the pair ``((e + 1) / 2, (e - 1) / 2)``;
* cycles on adjacent generators interact only when their occurrence
  intervals interleave: ``(1, 0)`` when the lower-index cycle starts
  first, ``(-1, 0)`` otherwise; nested or disjoint intervals contribute
  nothing.

These constants were pinned against an independent Fox-calculus oracle
(see tests/helpers.py) plus signature values of torus knots; the residual
freedom is a congruence and does not affect any derived invariant.

``compress`` shrinks a matrix by integer congruences and by deleting
metabolic pairs, which keeps the Alexander polynomial up to units and the
Levine-Tristram signature and nullity at every angle.  Rows/columns that
are entirely zero contribute nullity at *every* angle; they are dropped
and counted in ``extra_nullity``.
"""

from __future__ import annotations

from dataclasses import dataclass

import sympy
from sympy.polys.matrices import DomainMatrix

from .braiding import pd_to_braid
from .diagram import LinkDiagram
from .morse import BraidWord

_t = sympy.Symbol("t")


@dataclass(frozen=True)
class SeifertMatrix:
    """An integer Seifert matrix plus bookkeeping from compression.

    ``extra_nullity`` counts hyperbolic/zero summands split off by
    ``compress``; they add to the nullity at every angle and force the
    Alexander polynomial to vanish when positive.
    """

    entries: tuple[tuple[int, ...], ...]
    extra_nullity: int = 0

    def __post_init__(self):
        n = len(self.entries)
        if any(len(r) != n for r in self.entries):
            raise ValueError("matrix must be square")

    @property
    def size(self) -> int:
        return len(self.entries)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def block_sum(self, other: "SeifertMatrix") -> "SeifertMatrix":
        n, m = self.size, other.size
        out = [[0] * (n + m) for _ in range(n + m)]
        for i in range(n):
            out[i][:n] = list(self.entries[i])
        for i in range(m):
            out[n + i][n:] = list(other.entries[i])
        return SeifertMatrix(
            tuple(tuple(r) for r in out),
            self.extra_nullity + other.extra_nullity,
        )

    def transpose(self) -> "SeifertMatrix":
        return SeifertMatrix(
            tuple(zip(*self.entries)) if self.entries else (),
            self.extra_nullity,
        )

    def negate(self) -> "SeifertMatrix":
        return SeifertMatrix(
            tuple(tuple(-x for x in r) for r in self.entries),
            self.extra_nullity,
        )


def band_cycles(b: BraidWord):
    """Basis cycles: (generator, (pos1, sign1), (pos2, sign2)) per pair of
    consecutive occurrences of the same generator."""
    occ = {}
    for k, x in enumerate(b.word):
        occ.setdefault(abs(x), []).append((k, 1 if x > 0 else -1))
    cyc = []
    for i in sorted(occ):
        lst = occ[i]
        for p1, p2 in zip(lst, lst[1:]):
            cyc.append((i, p1, p2))
    return cyc


def braid_seifert_matrix(b: BraidWord) -> SeifertMatrix:
    """Seifert matrix of the closure of ``b`` from the disk-band surface.

    Every generator must occur at least once (otherwise the surface is
    disconnected and the matrix would be wrong for the split closure; go
    through a diagram and ``seifert_matrix`` instead).
    """
    used = {abs(x) for x in b.word}
    missing = set(range(1, b.strands)) - used
    if missing:
        raise ValueError(
            f"generators {sorted(missing)} unused; surface disconnected"
        )
    cyc = band_cycles(b)
    m = len(cyc)
    A = [[0] * m for _ in range(m)]
    for a in range(m):
        i, (k1, e1), (k2, e2) = cyc[a]
        A[a][a] = -(e1 + e2) // 2
        for c in range(a + 1, m):
            j, (l1, _f1), (l2, _f2) = cyc[c]
            if j == i:
                if l1 == k2:  # consecutive cycles share the middle band
                    A[a][c] += (e2 + 1) // 2
                    A[c][a] += (e2 - 1) // 2
            elif j == i + 1:
                if k1 < l1 < k2 < l2:
                    A[a][c] += 1
                elif l1 < k1 < l2 < k2:
                    A[a][c] += -1
                # nested or disjoint intervals: no interaction
    return SeifertMatrix(tuple(tuple(r) for r in A))


def seifert_matrix(d: LinkDiagram, compressed: bool = True) -> SeifertMatrix:
    """Seifert matrix of the link of ``d``, via braid position."""
    M = braid_seifert_matrix(pd_to_braid(d))
    return compress(M) if compressed else M


def _congruence_add(A, k, j, c):
    # A <- P A P^T  for  P = I + c E_{kj}
    n = len(A)
    for m in range(n):
        A[k][m] += c * A[j][m]
    for m in range(n):
        A[m][k] += c * A[m][j]


def _drop(A, idx):
    keep = [i for i in range(len(A)) if i not in idx]
    return [[A[i][j] for j in keep] for i in keep]


def compress(M: SeifertMatrix) -> SeifertMatrix:
    """Shrink ``M`` by congruences and metabolic-pair deletion.

    Preserves det(A - tA^T) up to units, and the signature and nullity of
    (1-w)A + (1-conj w)A^T at every unit angle w != 1.  Deleted zero
    rows/columns are tallied in ``extra_nullity``.

    The pair rule: if row i is zero and column i has a single entry,
    a unit at j, then rows/columns {i, j} split off a hyperbolic summand
    (expand det(A - tA^T) along row i, then column i; for the Hermitian
    form, clear row/column j with the unit and split a 2x2 block of
    signature 0).  When column i holds several entries including a unit,
    integer congruences first clear the others.
    """
    A = M.rows()
    extra = M.extra_nullity
    changed = True
    while changed and A:
        changed = False
        n = len(A)
        zero_rows = [i for i in range(n) if not any(A[i])]
        zero_cols = [i for i in range(n) if not any(A[k][i] for k in range(n))]
        both = set(zero_rows) & set(zero_cols)
        if both:
            A = _drop(A, both)
            extra += len(both)
            changed = True
            continue
        for i in zero_rows:
            col = [k for k in range(n) if A[k][i]]
            units = [k for k in col if abs(A[k][i]) == 1]
            if not units:
                continue
            j = units[0]
            u = A[j][i]
            for k in col:
                if k != j:
                    _congruence_add(A, k, j, -A[k][i] * u)
            A = _drop(A, {i, j})
            changed = True
            break
        if changed:
            continue
        for i in zero_cols:
            row = [k for k in range(n) if A[i][k]]
            units = [k for k in row if abs(A[i][k]) == 1]
            if not units:
                continue
            j = units[0]
            u = A[i][j]
            for k in row:
                if k != j:
                    _congruence_add(A, k, j, -A[i][k] * u)
            A = _drop(A, {i, j})
            changed = True
            break
    return SeifertMatrix(tuple(tuple(r) for r in A), extra)


def alexander_det(M: SeifertMatrix) -> sympy.Poly:
    """det(A - tA^T) as a Poly in t (not normalized); zero if compression
    found everywhere-degenerate directions."""
    if M.extra_nullity:
        return sympy.Poly(0, _t)
    n = M.size
    if n == 0:
        return sympy.Poly(1, _t)
    ring = sympy.QQ[_t]
    dm = DomainMatrix(
        [
            [
                ring.from_sympy(
                    sympy.Integer(M.entries[i][j]) - _t * M.entries[j][i]
                )
                for j in range(n)
            ]
            for i in range(n)
        ],
        (n, n),
        ring,
    )
    return sympy.Poly(ring.to_sympy(dm.det()), _t)
