"""Monoid algebras truncated by powers of the augmentation ideal.

For a commutative monoid M and coefficient ring R this computes
R[M] / I^{n+1}, where I is the kernel of the augmentation R[M] -> R.

FREE monoids are handled symbolically: writing t_i = x_i - 1, the quotient
has the monomials in the t_i of total degree <= n as a basis, and
multiplication just deletes monomials above the cutoff.  The class of a
monoid element x^a expands through binomials: x^a = prod (1 + t_i)^{a_i}.

FINITE monoids go through exact integer linear algebra: I^{n+1} is spanned
additively by g * (m_0 - 1) * ... * (m_n - 1) with the m_i running over a
generating set and g over all elements, and the quotient is presented as a
finitely generated abelian group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from math import comb

from .abgroup import FgAbelianGroup, fg_group_from_relations
from .intlinalg import IntMatrix
from .monoid import FINITE, FREE, CommMonoid
from .rings import INTEGERS, CoefficientRing

Vector = tuple[int, ...]


def monomials_upto(rank: int, degree: int) -> list[Vector]:
    """Exponent vectors of total degree <= degree, in degree-lex order."""
    out: list[Vector] = []
    for d in range(degree + 1):
        out.extend(_homogeneous(rank, d))
    return out


def _homogeneous(rank: int, d: int) -> list[Vector]:
    if rank == 0:
        return [()] if d == 0 else []
    out = []
    for first in range(d, -1, -1):
        for rest in _homogeneous(rank - 1, d - first):
            out.append((first,) + rest)
    return out


@dataclass(frozen=True)
class MonoidAlgebraQuotient:
    """R[M]/I^{n+1} with a fixed basis and exact structure constants."""

    monoid: CommMonoid
    degree: int
    ring: CoefficientRing
    basis_labels: tuple[str, ...]
    as_group: FgAbelianGroup
    _mono_index: dict = field(default=None, repr=False, compare=False)
    _lifts: tuple = field(default=None, repr=False, compare=False)

    # -- element arithmetic (coordinates in the canonical basis) ------------

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def zero(self) -> Vector:
        return self.as_group.zero()

    def one(self) -> Vector:
        return self.class_of(self.monoid.zero())

    def add(self, u: Vector, v: Vector) -> Vector:
        return self.as_group.add(u, v)

    def sub(self, u: Vector, v: Vector) -> Vector:
        return self.as_group.sub(u, v)

    def scale(self, k: int, u: Vector) -> Vector:
        return self.as_group.scale(k, u)

    def class_of(self, m) -> Vector:
        """Coordinates of the residue class of a monoid element."""
        if self.monoid.kind == FREE:
            coords = []
            for mono in self._mono_index["list"]:
                c = 1
                for a, j in zip(m, mono):
                    c *= comb(a, j)
                    if c == 0:
                        break
                coords.append(self.ring.normalize(c))
            return self.as_group._normalize(coords)
        raw = [0] * self.monoid.size
        raw[m] = 1
        return self.as_group.reduce(raw)

    def mul(self, u: Vector, v: Vector) -> Vector:
        if self.monoid.kind == FREE:
            idx = self._mono_index["map"]
            monos = self._mono_index["list"]
            acc = [0] * self.dim
            for i, ci in enumerate(u):
                if not ci:
                    continue
                mi = monos[i]
                for j, cj in enumerate(v):
                    if not cj:
                        continue
                    s = tuple(a + b for a, b in zip(mi, monos[j]))
                    k = idx.get(s)
                    if k is not None:
                        acc[k] += ci * cj
            return self.as_group._normalize(acc)
        # FINITE: lift to the monoid algebra, convolve, reduce
        size = self.monoid.size
        lu = self._lift_vector(u)
        lv = self._lift_vector(v)
        conv = [0] * size
        tab = self.monoid.table
        for a in range(size):
            ca = lu[a]
            if not ca:
                continue
            row = tab[a]
            for b in range(size):
                cb = lv[b]
                if cb:
                    conv[row[b]] += ca * cb
        return self.as_group.reduce(conv)

    def _lift_vector(self, u: Vector) -> list[int]:
        coords = self.as_group._normalize(u)
        out = [0] * self.monoid.size
        for c, lift in zip(coords, self._lifts):
            if c:
                for k in range(self.monoid.size):
                    out[k] += c * lift[k]
        return out

    def power(self, u: Vector, k: int) -> Vector:
        acc = self.one()
        for _ in range(k):
            acc = self.mul(acc, u)
        return acc

    def augmentation(self, u: Vector) -> int:
        """Image under R[M]/I^{n+1} -> R (sum of monoid-basis coefficients)."""
        if self.monoid.kind == FREE:
            # in shifted coordinates only the constant term survives
            return self.ring.normalize(u[0])
        return self.ring.normalize(sum(self._lift_vector(u)))

    def invariants(self):
        return self.as_group.invariants()


def aug_ideal_power_quotient(monoid: CommMonoid, degree: int,
                             ring: CoefficientRing = INTEGERS) -> MonoidAlgebraQuotient:
    """R[M]/I^{n+1} for the given monoid, truncation degree n, and ring."""
    if degree < 0:
        raise ValueError("truncation degree must be >= 0")
    if monoid.kind == FREE:
        return _free_quotient(monoid, degree, ring)
    return _finite_quotient(monoid, degree, ring)


def _free_quotient(monoid: CommMonoid, n: int, ring: CoefficientRing) -> MonoidAlgebraQuotient:
    k = monoid.rank
    monos = monomials_upto(k, n)
    labels = tuple("1" if not any(m) else "*".join(
        f"t{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e) for m in monos)
    dim = len(monos)
    if ring.is_integers:
        grp = FgAbelianGroup.free(dim)
    else:
        grp = FgAbelianGroup.from_invariants((ring.modulus,) * dim, 0)
    idx = {"list": monos, "map": {m: i for i, m in enumerate(monos)}}
    return MonoidAlgebraQuotient(monoid, n, ring, labels, grp, _mono_index=idx)


def _finite_quotient(monoid: CommMonoid, n: int, ring: CoefficientRing) -> MonoidAlgebraQuotient:
    size = monoid.size
    gens = monoid.generators()
    tab = monoid.table
    rows: list[list[int]] = []
    # span of g * prod (m_i - 1): expand sparsely over the element basis
    for g in range(size):
        for ms in combinations_with_replacement(gens, n + 1):
            vec: dict[int, int] = {g: 1}
            for m in ms:
                nxt: dict[int, int] = {}
                for a, c in vec.items():
                    nxt[tab[a][m]] = nxt.get(tab[a][m], 0) + c
                    nxt[a] = nxt.get(a, 0) - c
                vec = {a: c for a, c in nxt.items() if c}
            if vec:
                row = [0] * size
                for a, c in vec.items():
                    row[a] = c
                rows.append(row)
    if not ring.is_integers:
        m = ring.modulus
        for a in range(size):
            row = [0] * size
            row[a] = m
            rows.append(row)
    grp = fg_group_from_relations(size, rows)
    labels = tuple(f"e{i}" for i in range(grp.num_coords))
    lifts = tuple(tuple(grp.lift(grp.generator(i))) for i in range(grp.num_coords))
    return MonoidAlgebraQuotient(monoid, n, ring, labels, grp, _lifts=lifts)


def invert_monoid_element(q: MonoidAlgebraQuotient, m) -> Vector:
    """Inverse of the class of a monoid element.

    The class u of m has u - 1 nilpotent (its (n+1)st power lands in the
    deleted ideal power), so sum_{k<=n} (1-u)^k inverts it.
    """
    u = q.class_of(m)
    one = q.one()
    x = q.sub(one, u)
    acc = one
    term = one
    for _ in range(q.degree):
        term = q.mul(term, x)
        acc = q.add(acc, term)
    if q.mul(u, acc) != one:
        raise AssertionError("inversion by nilpotence failed; element class is not a unit")
    return acc


def passi_functor(k: int, n: int, p: int,
                  cap: int = 64) -> tuple[MonoidAlgebraQuotient, int]:
    """F_p[(F_p)^k] / I^{n+1} together with its dimension over F_p.

    The dimension equals the number of exponent vectors a in [0, p-1]^k with
    sum(a) <= n, since F_p[x]/(x^p - 1) = F_p[t]/(t^p) collapses each
    coordinate to truncated divided powers.
    """
    monoid = CommMonoid.vector_space_monoid(p, k, cap=cap)
    q = aug_ideal_power_quotient(monoid, n, CoefficientRing(p))
    torsion, free_rank = q.invariants()
    if free_rank or any(d != p for d in torsion):
        raise AssertionError("quotient is not an F_p vector space")
    return q, len(torsion)


def passi_dimension_oracle(k: int, n: int, p: int) -> int:
    """Independent count of {a in [0,p-1]^k : sum(a) <= n}."""
    return sum(1 for a in product(range(p), repeat=k) if sum(a) <= n)


def dual_functor_dimension(k: int, n: int, p: int) -> tuple[int, int]:
    """Dimension data for the dual-side functor: (dim of the image of V, dim)."""
    return k, passi_dimension_oracle(k, n, p)


def free_group_algebra_quotient(rank: int, n: int,
                                ring: CoefficientRing = INTEGERS):
    """R[Z^rank]/I^{n+1}, with Z^rank presented as the completion of a free monoid.

    Z^rank is realized as the free monoid on pairs u_i, v_i modulo u_i v_i = 1;
    the quotient is R[N^{2 rank}]/I^{n+1} further divided by the submodule
    (u_i v_i - 1) * (basis).  Returns (group, basis_monomials, embed) where
    embed maps a monomial of R[N^rank]/I^{n+1} (in the shifted t-basis) to
    coordinates of the quotient, witnessing R[M]/I^{n+1} -> R[M^+]/I^{n+1}.
    """
    big = _free_quotient(CommMonoid.free(2 * rank), n, ring)
    monos = big._mono_index["list"]
    idx = big._mono_index["map"]
    dim = big.dim

    rows = []
    for i in range(rank):
        # u_i v_i - 1 = s_i + t_i + s_i t_i in shifted coordinates
        si = tuple(1 if j == 2 * i else 0 for j in range(2 * rank))
        ti = tuple(1 if j == 2 * i + 1 else 0 for j in range(2 * rank))
        sti = tuple(a + b for a, b in zip(si, ti))
        rel = {si: 1, ti: 1}
        if sti in idx:
            rel[sti] = 1
        for mono in monos:
            shifted: dict[Vector, int] = {}
            for m, c in rel.items():
                s = tuple(a + b for a, b in zip(m, mono))
                if s in idx:
                    shifted[s] = shifted.get(s, 0) + c
            if shifted:
                row = [0] * dim
                for m, c in shifted.items():
                    row[idx[m]] = c
                rows.append(row)
    if not ring.is_integers:
        for a in range(dim):
            row = [0] * dim
            row[a] = ring.modulus
            rows.append(row)
    grp = fg_group_from_relations(dim, rows)

    def embed(small_mono: Vector) -> Vector:
        # x_i of the rank-k monoid maps to u_i, so t_i maps to s_i
        target = tuple(small_mono[i // 2] if i % 2 == 0 else 0 for i in range(2 * rank))
        raw = [0] * dim
        raw[idx[target]] = 1
        return grp.reduce(raw)

    return grp, monos, embed
