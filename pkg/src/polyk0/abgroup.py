"""Finitely generated abelian groups in invariant-factor normal form.

A group is presented as Z^g modulo the row span of a relation matrix.  Smith
normal form turns that into canonical coordinates: one coordinate per
invariant factor >= 2 (reduced mod the factor) followed by one per free rank.
Elements are plain tuples of ints in those canonical coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .intlinalg import IntMatrix, dedupe_rows, row_hermite, smith_normal_form, solve_exact

Element = tuple[int, ...]


@dataclass(frozen=True)
class FgAbelianGroup:
    ngens: int
    torsion: tuple[int, ...]          # invariant factors >= 2, divisibility chain
    free_rank: int
    _diag: tuple[int, ...] = field(repr=False)        # SNF diagonal padded to length ngens
    _to_normal: IntMatrix = field(repr=False)         # V with y = x @ V
    _from_normal: IntMatrix = field(repr=False)       # V^{-1}

    # -- construction ------------------------------------------------------

    @staticmethod
    def free(rank: int) -> "FgAbelianGroup":
        v = IntMatrix.identity(rank)
        return FgAbelianGroup(rank, (), rank, (0,) * rank, v, v)

    @staticmethod
    def from_invariants(torsion: tuple[int, ...], free_rank: int) -> "FgAbelianGroup":
        for i, d in enumerate(torsion):
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
            if i and torsion[i] % torsion[i - 1]:
                raise ValueError("invariant factors must form a divisibility chain")
        n = len(torsion) + free_rank
        v = IntMatrix.identity(n)
        return FgAbelianGroup(n, tuple(torsion), free_rank,
                              tuple(torsion) + (0,) * free_rank, v, v)

    # -- invariants --------------------------------------------------------

    @property
    def num_coords(self) -> int:
        return len(self.torsion) + self.free_rank

    def invariants(self) -> tuple[tuple[int, ...], int]:
        return self.torsion, self.free_rank

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int:
        if not self.is_finite():
            raise ValueError("group is infinite")
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def same_invariants(self, other: "FgAbelianGroup") -> bool:
        return self.torsion == other.torsion and self.free_rank == other.free_rank

    # -- elements ----------------------------------------------------------

    def _normalize(self, coords) -> Element:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.num_coords:
            raise ValueError("wrong coordinate length")
        t = len(self.torsion)
        return tuple(c % d for c, d in zip(coords[:t], self.torsion)) + coords[t:]

    def zero(self) -> Element:
        return (0,) * self.num_coords

    def add(self, a: Element, b: Element) -> Element:
        return self._normalize(tuple(x + y for x, y in zip(a, b)))

    def neg(self, a: Element) -> Element:
        return self._normalize(tuple(-x for x in a))

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def scale(self, k: int, a: Element) -> Element:
        return self._normalize(tuple(k * x for x in a))

    def generator(self, i: int) -> Element:
        return self._normalize(tuple(1 if j == i else 0 for j in range(self.num_coords)))

    def generators(self) -> list[Element]:
        return [self.generator(i) for i in range(self.num_coords)]

    def elements(self):
        """All elements; only for finite groups."""
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        for tup in product(*(range(d) for d in self.torsion)):
            yield tup

    # -- raw coordinates (Z^ngens presentations) ----------------------------

    def reduce(self, raw) -> Element:
        """Canonical coordinates of a raw Z^ngens vector."""
        raw = list(raw)
        if len(raw) != self.ngens:
            raise ValueError("raw vector has wrong length")
        v = self._to_normal
        y = [sum(raw[i] * v.entries[i][j] for i in range(self.ngens)) for j in range(self.ngens)]
        out = []
        for val, d in zip(y, self._diag):
            if d == 1:
                continue
            out.append(val % d if d else val)
        return tuple(out)

    def lift(self, coords: Element) -> list[int]:
        """A raw Z^ngens representative of the canonical coordinates."""
        coords = self._normalize(coords)
        y = []
        k = 0
        for d in self._diag:
            if d == 1:
                y.append(0)
            else:
                y.append(coords[k])
                k += 1
        w = self._from_normal
        return [sum(y[i] * w.entries[i][j] for i in range(self.ngens)) for j in range(self.ngens)]


def fg_group_from_relations(ngens: int, relations) -> FgAbelianGroup:
    """Z^ngens modulo the subgroup generated by the given relation rows."""
    rows = dedupe_rows([list(r) for r in relations])
    if ngens == 0:
        return FgAbelianGroup(0, (), 0, (), IntMatrix.identity(0), IntMatrix.identity(0))
    if not rows:
        return FgAbelianGroup.free(ngens)
    rel = IntMatrix.from_rows(rows, ngens)
    if rel.cols != ngens:
        raise ValueError("relation rows must have length ngens")
    if rel.rows > 2 * ngens:
        # big relation sets (e.g. all monoid pairs) carry lots of redundancy
        _, h, r = row_hermite(rel, transform=False)
        rel = IntMatrix.from_rows([list(h.entries[i]) for i in range(r)], ngens)
    _, d, v = smith_normal_form(rel)
    diag = d.diagonal() + [0] * (ngens - min(rel.rows, ngens))
    torsion = tuple(x for x in diag if x > 1)
    free_rank = sum(1 for x in diag if x == 0)
    vinv = solve_exact(v, IntMatrix.identity(ngens))
    return FgAbelianGroup(ngens, torsion, free_rank, tuple(diag), v, vinv)


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism between f.g. abelian groups, by images of canonical generators."""

    source: FgAbelianGroup
    target: FgAbelianGroup
    images: tuple[Element, ...]

    def __post_init__(self):
        if len(self.images) != self.source.num_coords:
            raise ValueError("need one image per source generator")
        for i, d in enumerate(self.source.torsion):
            if any(self.target.scale(d, self.images[i])):
                raise ValueError("torsion relation not respected; map is not well defined")

    def apply(self, a: Element) -> Element:
        a = self.source._normalize(a)
        out = self.target.zero()
        for c, img in zip(a, self.images):
            if c:
                out = self.target.add(out, self.target.scale(c, img))
        return out

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other."""
        return GroupHom(other.source, self.target,
                        tuple(self.apply(im) for im in other.images))


def hom_from_raw_images(source: FgAbelianGroup, target: FgAbelianGroup,
                        raw_images: list[Element]) -> GroupHom:
    """Build a GroupHom from images of the raw Z^ngens basis of the source.

    raw_images[i] is the target element assigned to the i-th raw generator;
    the hom must kill the source relations, which the GroupHom constructor
    checks via torsion orders.
    """
    imgs = []
    for g in range(source.num_coords):
        lift = source.lift(source.generator(g))
        acc = target.zero()
        for c, img in zip(lift, raw_images):
            if c:
                acc = target.add(acc, target.scale(c, img))
        imgs.append(acc)
    return GroupHom(source, target, tuple(imgs))
