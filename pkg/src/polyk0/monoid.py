"""Commutative monoids and their group completions.

Two flavors: FINITE (explicit addition table, validated on construction) and
FREE (rank k; elements are k-tuples of naturals).  Completion of a FREE
monoid is the coordinate embedding into Z^k; completion of a FINITE monoid is
the free abelian group on its elements modulo [a] + [b] - [a+b].
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abgroup import Element, FgAbelianGroup, GroupHom, fg_group_from_relations

DEFAULT_FINITE_CAP = 64

FINITE = "finite"
FREE = "free"


@dataclass(frozen=True)
class CommMonoid:
    kind: str
    rank: int = 0
    table: tuple[tuple[int, ...], ...] = ()
    identity: int = 0
    _gens: tuple = field(default=(), repr=False)

    @staticmethod
    def free(rank: int) -> "CommMonoid":
        if rank < 0:
            raise ValueError("rank must be >= 0")
        gens = tuple(tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank))
        return CommMonoid(FREE, rank=rank, _gens=gens)

    @staticmethod
    def finite(table, identity: int = 0, cap: int = DEFAULT_FINITE_CAP) -> "CommMonoid":
        tab = tuple(tuple(int(x) for x in row) for row in table)
        n = len(tab)
        if n == 0:
            raise ValueError("finite monoid needs at least the identity element")
        if n > cap:
            raise ValueError(f"finite monoid larger than the cap ({n} > {cap})")
        for row in tab:
            if len(row) != n or any(not (0 <= x < n) for x in row):
                raise ValueError("addition table must be n x n over element indices")
        for a in range(n):
            if tab[a][identity] != a or tab[identity][a] != a:
                raise ValueError("identity element fails its unit law")
            for b in range(a + 1, n):
                if tab[a][b] != tab[b][a]:
                    raise ValueError("addition table is not commutative")
        for a in range(n):
            for b in range(n):
                ab = tab[a][b]
                for c in range(n):
                    if tab[ab][c] != tab[a][tab[b][c]]:
                        raise ValueError(f"associativity fails at ({a},{b},{c})")
        gens = _greedy_generators(tab, identity)
        return CommMonoid(FINITE, table=tab, identity=identity, _gens=gens)

    @staticmethod
    def cyclic(n: int) -> "CommMonoid":
        """Z/n as a finite monoid (a group, in fact)."""
        return CommMonoid.finite([[((a + b) % n) for b in range(n)] for a in range(n)])

    @staticmethod
    def vector_space_monoid(p: int, k: int, cap: int = DEFAULT_FINITE_CAP) -> "CommMonoid":
        """(F_p)^k under addition, as a finite monoid; elements indexed base p."""
        n = p ** k
        if n > cap:
            raise ValueError(f"p**k exceeds the finite cap ({n} > {cap})")

        def digits(x):
            return [(x // p ** i) % p for i in range(k)]

        def undigits(ds):
            return sum(d * p ** i for i, d in enumerate(ds))

        table = [[undigits([(x + y) % p for x, y in zip(digits(a), digits(b))])
                  for b in range(n)] for a in range(n)]
        return CommMonoid.finite(table, identity=0, cap=cap)

    # -- structure -----------------------------------------------------------

    @property
    def size(self) -> int:
        if self.kind != FINITE:
            raise ValueError("only finite monoids have a size")
        return len(self.table)

    def zero(self):
        return self.identity if self.kind == FINITE else (0,) * self.rank

    def add(self, a, b):
        if self.kind == FINITE:
            return self.table[a][b]
        return tuple(x + y for x, y in zip(a, b))

    def scale(self, k: int, a):
        if k < 0:
            raise ValueError("monoid elements have no negatives")
        acc = self.zero()
        for _ in range(k):
            acc = self.add(acc, a)
        return acc

    def elements(self):
        if self.kind != FINITE:
            raise ValueError("cannot enumerate a free monoid")
        return range(len(self.table))

    def generators(self):
        """A small deterministic generating set (all of it reachable-closure greedy)."""
        return list(self._gens)


def _greedy_generators(tab, identity) -> tuple:
    n = len(tab)
    gens: list[int] = []
    closure = {identity}
    while len(closure) < n:
        gens.append(min(a for a in range(n) if a not in closure))
        # closure of the submonoid generated so far
        closure = {identity} | set(gens)
        grew = True
        while grew:
            grew = False
            for x in list(closure):
                for y in list(closure):
                    z = tab[x][y]
                    if z not in closure:
                        closure.add(z)
                        grew = True
    return tuple(gens)


@dataclass(frozen=True)
class MonoidHom:
    """Additive map from a monoid into an f.g. abelian group.

    FINITE source: stores the whole value table.  FREE source: stores the
    images of the k standard generators and extends additively.
    """

    source: CommMonoid
    target: FgAbelianGroup
    values: tuple[Element, ...]

    def __post_init__(self):
        if self.source.kind == FINITE:
            if len(self.values) != self.source.size:
                raise ValueError("need one value per element")
            tab = self.source.table
            tgt = self.target
            for a in range(self.source.size):
                for b in range(a, self.source.size):
                    lhs = tgt.add(self.values[a], self.values[b])
                    if lhs != self.values[tab[a][b]]:
                        raise ValueError(f"not additive at ({a},{b})")
            if any(self.values[self.source.identity]):
                raise ValueError("identity must map to zero")
        else:
            if len(self.values) != self.source.rank:
                raise ValueError("need one value per free generator")

    def apply(self, a) -> Element:
        if self.source.kind == FINITE:
            return self.values[a]
        out = self.target.zero()
        for c, img in zip(a, self.values):
            if c:
                out = self.target.add(out, self.target.scale(c, img))
        return out


@dataclass(frozen=True)
class MonoidMap:
    """Monoid homomorphism between commutative monoids.

    FINITE source: full value table (indices or tuples, per target kind),
    additivity checked exhaustively.  FREE source: generator images.
    """

    source: CommMonoid
    target: CommMonoid
    values: tuple

    def __post_init__(self):
        if self.source.kind == FINITE:
            if len(self.values) != self.source.size:
                raise ValueError("need one value per element")
            if self.values[self.source.identity] != self.target.zero():
                raise ValueError("identity must map to identity")
            for a in range(self.source.size):
                for b in range(a, self.source.size):
                    if self.target.add(self.values[a], self.values[b]) \
                            != self.values[self.source.add(a, b)]:
                        raise ValueError(f"not a monoid map at ({a},{b})")
        else:
            if len(self.values) != self.source.rank:
                raise ValueError("need one image per free generator")

    def apply(self, a):
        if self.source.kind == FINITE:
            return self.values[a]
        out = self.target.zero()
        for c, img in zip(a, self.values):
            for _ in range(c):
                out = self.target.add(out, img)
        return out


def group_completion(m: CommMonoid) -> tuple[FgAbelianGroup, MonoidHom]:
    """Grothendieck group of a commutative monoid, with the canonical map.

    FREE of rank k completes to Z^k via the coordinate embedding.  FINITE
    completes to the free abelian group on the elements modulo all relations
    [a] + [b] - [a+b]; the canonical map sends an element to its class.
    """
    if m.kind == FREE:
        g = FgAbelianGroup.free(m.rank)
        return g, MonoidHom(m, g, tuple(g.generators()))
    n = m.size
    rows = []
    for a in range(n):
        for b in range(a, n):
            row = [0] * n
            row[a] += 1
            row[b] += 1
            row[m.table[a][b]] -= 1
            rows.append(row)
    g = fg_group_from_relations(n, rows)
    values = tuple(g.reduce([1 if i == a else 0 for i in range(n)]) for a in range(n))
    return g, MonoidHom(m, g, values)


def factor_through_completion(hom: MonoidHom, completion: tuple[FgAbelianGroup, MonoidHom]) -> GroupHom:
    """Universal property: an additive map M -> A factors through M^+.

    Returns the unique group map f with f o i == hom, where i is the
    canonical map of the supplied completion.
    """
    gplus, i = completion
    if i.source is not hom.source and i.source != hom.source:
        raise ValueError("completion does not belong to the map's source monoid")
    target = hom.target
    if hom.source.kind == FREE:
        return GroupHom(gplus, target, tuple(hom.values))
    imgs = []
    for g in range(gplus.num_coords):
        lift = gplus.lift(gplus.generator(g))
        acc = target.zero()
        for coeff, a in zip(lift, range(hom.source.size)):
            if coeff:
                acc = target.add(acc, target.scale(coeff, hom.values[a]))
        imgs.append(acc)
    out = GroupHom(gplus, target, tuple(imgs))
    for a in hom.source.elements() if hom.source.kind == FINITE else []:
        if out.apply(i.apply(a)) != hom.apply(a):
            raise AssertionError("factorization failed to reproduce the map")
    return out


def complete_monoid_map(f: MonoidMap,
                        source_completion: tuple[FgAbelianGroup, MonoidHom],
                        target_completion: tuple[FgAbelianGroup, MonoidHom]) -> GroupHom:
    """Functoriality of completion: the induced map M^+ -> N^+."""
    _, i_n = target_completion
    if f.source.kind == FREE:
        vals = tuple(i_n.apply(v) for v in f.values)
    else:
        vals = tuple(i_n.apply(f.apply(a)) for a in f.source.elements())
    hom = MonoidHom(f.source, i_n.target, vals)
    return factor_through_completion(hom, source_completion)
