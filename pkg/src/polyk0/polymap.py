"""Polynomial maps between commutative monoids and abelian groups.

A map f: M -> A is polynomial of degree <= n when all (n+1)-fold iterated
differences (D_y f)(x) = f(x+y) - f(x) vanish.  Degree <= -1 means the zero
map.  Maps are stored per "coset": the domain splits into a finite part
(monoid elements, or torsion coordinates) and a free part, and each coset of
the finite part carries a table of Mahler coefficients over the free part:

    f(c, x) = sum_j alpha_{c,j} * prod_i binom(x_i, j_i)

For pure-finite domains this degenerates to a value table; for pure-free
domains to a single Mahler table.  The representation is faithful (it *is*
the function), so difference operators act symbolically and degree checks
along a generating set are genuine certificates, not samples.  An opaque
callable fallback exists for maps that are not polynomial at all; those can
only be checked pointwise on a box.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import comb

from .abgroup import Element, FgAbelianGroup, fg_group_from_relations
from .monoid import FINITE, FREE, CommMonoid, MonoidHom, group_completion
from .monoid_ring import monomials_upto


def gbinom(n: int, k: int) -> int:
    """binom(n, k) for any integer n (falling-factorial definition)."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= n - i
    den = 1
    for i in range(2, k + 1):
        den *= i
    return num // den


# --------------------------------------------------------------------------
# domains


@dataclass(frozen=True)
class FreeMonoidDomain:
    rank: int

    @property
    def free_rank(self):
        return self.rank

    def finite_keys(self):
        return [()]

    def split(self, point):
        return (), tuple(point)

    def join(self, fin, free):
        return tuple(free)

    def add(self, p, q):
        return tuple(a + b for a, b in zip(p, q))

    def zero(self):
        return (0,) * self.rank

    def add_fin(self, c, d):
        return ()

    def generators(self):
        return [tuple(1 if j == i else 0 for j in range(self.rank)) for i in range(self.rank)]

    def describe(self):
        return f"free monoid of rank {self.rank}"


@dataclass(frozen=True)
class FiniteMonoidDomain:
    monoid: CommMonoid

    def __post_init__(self):
        if self.monoid.kind != FINITE:
            raise ValueError("FiniteMonoidDomain needs a finite monoid")

    @property
    def free_rank(self):
        return 0

    def finite_keys(self):
        return list(self.monoid.elements())

    def split(self, point):
        return point, ()

    def join(self, fin, free):
        return fin

    def add(self, p, q):
        return self.monoid.add(p, q)

    def zero(self):
        return self.monoid.zero()

    def add_fin(self, c, d):
        return self.monoid.add(c, d)

    def generators(self):
        return self.monoid.generators()

    def describe(self):
        return f"finite monoid with {self.monoid.size} elements"


@dataclass(frozen=True)
class GroupDomain:
    group: FgAbelianGroup

    @property
    def free_rank(self):
        return self.group.free_rank

    def finite_keys(self):
        t = self.group.torsion
        return [tup for tup in product(*(range(d) for d in t))]

    def split(self, point):
        t = len(self.group.torsion)
        return tuple(point[:t]), tuple(point[t:])

    def join(self, fin, free):
        return tuple(fin) + tuple(free)

    def add(self, p, q):
        return self.group.add(p, q)

    def zero(self):
        return self.group.zero()

    def add_fin(self, c, d):
        return tuple((a + b) % m for a, b, m in zip(c, d, self.group.torsion))

    def generators(self):
        return self.group.generators()

    def describe(self):
        t, r = self.group.invariants()
        return f"group with invariant factors {list(t)} and free rank {r}"


Domain = FreeMonoidDomain | FiniteMonoidDomain | GroupDomain


# --------------------------------------------------------------------------
# the map type


def _normalize_coeffs(codomain, coeffs):
    out = {}
    for fin, table in coeffs.items():
        clean = {tuple(j): codomain._normalize(v) for j, v in table.items()}
        clean = {j: v for j, v in clean.items() if any(v)}
        if clean:
            out[fin] = clean
    return out


@dataclass
class PolyMap:
    domain: Domain
    codomain: FgAbelianGroup
    degree_bound: int
    coeffs: dict = field(default_factory=dict)
    func: object = None          # opaque callable fallback; poly structure unknown
    certified: bool = False

    def __post_init__(self):
        if self.func is None:
            self.coeffs = _normalize_coeffs(self.codomain, self.coeffs)
            if not self.coeffs:
                self.degree_bound = -1

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_mahler(domain, codomain, table, degree=None) -> "PolyMap":
        """Map on a pure-free domain given by Mahler coefficients {j: element}."""
        if domain.free_rank == 0:
            raise ValueError("mahler form needs a free part")
        if isinstance(domain, GroupDomain) and domain.group.torsion:
            raise ValueError("mixed domains need per-coset tables; use from_coset_tables")
        clean = {tuple(j): codomain._normalize(v) for j, v in table.items() if any(v)}
        deg = max((sum(j) for j in clean), default=-1)
        if degree is None:
            degree = deg
        if deg > degree:
            raise ValueError("coefficient support exceeds the claimed degree")
        return PolyMap(domain, codomain, degree, {(): clean}, certified=True)

    @staticmethod
    def from_table(domain: FiniteMonoidDomain, codomain, values, degree_bound=None) -> "PolyMap":
        """Map on a finite monoid given by its full value table."""
        n = domain.monoid.size
        if len(values) != n:
            raise ValueError("need one value per element")
        coeffs = {a: {(): codomain._normalize(values[a])} for a in range(n)}
        if degree_bound is None:
            degree_bound = n  # every map on a finite monoid has *some* finite bound; unverified
        return PolyMap(domain, codomain, degree_bound, coeffs, certified=False)

    @staticmethod
    def from_coset_tables(domain, codomain, coeffs, degree_bound, certified=False) -> "PolyMap":
        return PolyMap(domain, codomain, degree_bound, coeffs, certified=certified)

    @staticmethod
    def from_function(domain, codomain, fn, degree_bound) -> "PolyMap":
        """Opaque callable; degree claims about it can only be box-checked."""
        return PolyMap(domain, codomain, degree_bound, {}, func=fn, certified=False)

    @staticmethod
    def constant(domain, codomain, value) -> "PolyMap":
        value = codomain._normalize(value)
        deg = 0 if any(value) else -1
        coeffs = {fin: {(0,) * _freerank(domain): value} for fin in domain.finite_keys()}
        return PolyMap(domain, codomain, deg, coeffs, certified=True)

    @staticmethod
    def fit(domain, codomain, fn, degree) -> "PolyMap":
        """Interpolate a polynomial map of the stated degree from point values.

        Mahler coefficients come from iterated forward differences at the
        origin of each coset; the fit is then revalidated on a box one wider
        than the degree, so a non-polynomial fn raises instead of silently
        truncating.
        """
        r = _freerank(domain)
        coeffs = {}
        for fin in domain.finite_keys():
            table = {}
            for j in monomials_upto(r, max(degree, 0)):
                acc = codomain.zero()
                for s in product(*(range(jc + 1) for jc in j)):
                    sign = (-1) ** (sum(j) - sum(s))
                    w = 1
                    for jc, sc in zip(j, s):
                        w *= comb(jc, sc)
                    acc = codomain.add(acc, codomain.scale(sign * w, fn(domain.join(fin, s))))
                if any(acc):
                    table[j] = acc
            if table:
                coeffs[fin] = table
        out = PolyMap(domain, codomain, degree, coeffs)
        side = max(degree, 0) + 2
        for fin in domain.finite_keys():
            for free in product(range(side), repeat=r):
                pt = domain.join(fin, free)
                if out.evaluate(pt) != codomain._normalize(fn(pt)):
                    raise ValueError(f"values at {pt} do not match a degree-{degree} polynomial map")
        out.certified = isinstance(domain, (FreeMonoidDomain,)) or _is_pure_free_group(domain)
        return out

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, point) -> Element:
        if self.func is not None:
            return self.codomain._normalize(self.func(point))
        fin, free = self.domain.split(point)
        table = self.coeffs.get(fin)
        if not table:
            return self.codomain.zero()
        acc = self.codomain.zero()
        for j, alpha in table.items():
            w = 1
            for x, jc in zip(free, j):
                w *= gbinom(x, jc)
                if w == 0:
                    break
            if w:
                acc = self.codomain.add(acc, self.codomain.scale(w, alpha))
        return acc

    def is_zero_map(self) -> bool:
        if self.func is not None:
            raise ValueError("opaque maps cannot be decided symbolically")
        return not self.coeffs

    def equals(self, other: "PolyMap") -> bool:
        return (self.domain == other.domain
                and self.codomain.same_invariants(other.codomain)
                and self.coeffs == other.coeffs)

    def with_certificate(self, n: int) -> "PolyMap":
        return PolyMap(self.domain, self.codomain, n, self.coeffs, certified=True)


def _freerank(domain) -> int:
    return domain.free_rank


def _is_pure_free_group(domain) -> bool:
    return isinstance(domain, GroupDomain) and not domain.group.torsion


# --------------------------------------------------------------------------
# difference calculus


def cross_difference(f: PolyMap, y) -> PolyMap:
    """The difference map (D_y f)(x) = f(x + y) - f(x).

    Acts symbolically on represented maps (Vandermonde shift of the Mahler
    tables plus coset translation); on opaque maps it wraps the callable.
    Drops the degree bound by one.
    """
    dom = f.domain
    new_bound = max(f.degree_bound - 1, -1)
    if f.func is not None:
        fn = f.func
        cod = f.codomain

        def shifted(x, _fn=fn, _y=y):
            return cod.sub(cod._normalize(_fn(dom.add(x, _y))), cod._normalize(_fn(x)))

        return PolyMap(dom, cod, new_bound, {}, func=shifted, certified=False)
    yfin, yfree = dom.split(y)
    cod = f.codomain
    new_coeffs: dict = {}
    for fin in dom.finite_keys():
        src = f.coeffs.get(dom.add_fin(fin, yfin), {})
        cur = f.coeffs.get(fin, {})
        table: dict = {}
        indices = set(cur)
        for j in src:
            for i in product(*(range(jc + 1) for jc in j)):
                indices.add(i)
        for i in indices:
            acc = cod.zero()
            for j, alpha in src.items():
                if all(jc >= ic for jc, ic in zip(j, i)):
                    w = 1
                    for yc, jc, ic in zip(yfree, j, i):
                        w *= gbinom(yc, jc - ic)
                        if w == 0:
                            break
                    if w:
                        acc = cod.add(acc, cod.scale(w, alpha))
            if i in cur:
                acc = cod.sub(acc, cur[i])
            if any(acc):
                table[i] = acc
        if table:
            new_coeffs[fin] = table
    return PolyMap(dom, cod, new_bound, new_coeffs, certified=f.certified)


@dataclass(frozen=True)
class DegreeCertificate:
    degree: int
    mode: str                 # "symbolic" (genuine) or "box" (sampled)
    generators: tuple
    box: int | None = None

    @property
    def ok(self):
        return True


@dataclass(frozen=True)
class DegreeCounterexample:
    degree: int
    directions: tuple         # the y's of the offending iterated difference
    point: object             # the x where it fails to vanish
    value: Element

    @property
    def ok(self):
        return False


def _support_degree(f: PolyMap) -> int:
    return max((sum(j) for t in f.coeffs.values() for j in t), default=-1)


def _find_nonzero_point(f: PolyMap):
    """A point where a represented nonzero map is nonzero.

    A degree-<=n map vanishing on the side-(n+1) grid of every coset is zero,
    so scanning that grid always finds a witness.
    """
    r = _freerank(f.domain)
    side = max(f.degree_bound, _support_degree(f), 0) + 1
    for fin in f.coeffs:
        for free in product(range(side), repeat=r):
            pt = f.domain.join(fin, free)
            v = f.evaluate(pt)
            if any(v):
                return pt, v
    raise AssertionError("nonzero representation with no witness on the grid")


def verify_degree(f: PolyMap, n: int, box: int | None = None):
    """Certify deg(f) <= n or produce an explicit counterexample.

    Represented maps get a genuine certificate: all (n+1)-fold iterated
    differences along the domain's generating set are computed symbolically
    and checked to vanish identically (differences commute, so multisets of
    directions suffice).  Opaque maps are checked pointwise on the coordinate
    box [0, box)^k of every coset, which only certifies the box.
    """
    from itertools import combinations_with_replacement

    gens = f.domain.generators()
    if n < -1:
        raise ValueError("degree bound must be >= -1")
    if f.func is None:
        if n == -1:
            if f.is_zero_map():
                return DegreeCertificate(-1, "symbolic", ())
            pt, v = _find_nonzero_point(f)
            return DegreeCounterexample(-1, (), pt, v)
        for ys in combinations_with_replacement(gens, n + 1):
            g = f
            for y in ys:
                g = cross_difference(g, y)
            if not g.is_zero_map():
                pt, v = _find_nonzero_point(g)
                return DegreeCounterexample(n, ys, pt, v)
        return DegreeCertificate(n, "symbolic", tuple(gens))
    # opaque: pointwise inclusion-exclusion over the box
    side = box if box is not None else n + 2
    r = _freerank(f.domain)
    cod = f.codomain
    for ys in combinations_with_replacement(gens, n + 1):
        for fin in f.domain.finite_keys():
            for free in product(range(side), repeat=r):
                x = f.domain.join(fin, free)
                acc = cod.zero()
                for bits in product((0, 1), repeat=len(ys)):
                    pt = x
                    for b, y in zip(bits, ys):
                        if b:
                            pt = f.domain.add(pt, y)
                    sign = (-1) ** (len(ys) - sum(bits))
                    acc = cod.add(acc, cod.scale(sign, f.evaluate(pt)))
                if any(acc):
                    return DegreeCounterexample(n, ys, x, acc)
    return DegreeCertificate(n, "box", tuple(gens), box=side)


def vanishes_by_grid(f: PolyMap, n: int) -> bool:
    """Grid determinacy: a degree-<=n map vanishing on the side-(n+1) grid
    of every coset vanishes identically.  Returns the grid check's verdict."""
    r = _freerank(f.domain)
    side = max(n, 0) + 1
    for fin in f.domain.finite_keys():
        for free in product(range(side), repeat=r):
            if any(f.evaluate(f.domain.join(fin, free))):
                return False
    return True


# --------------------------------------------------------------------------
# extension over group completion


def closed_form_extension_value(f: PolyMap, a, b) -> Element:
    """Value of the canonical extension at i(a) - i(b), in closed form:

        f+(a - b) = sum_{j=0}^{n} (-1)^j binom(n+1, j+1) f(a + j*b)

    where n is the degree bound.  This is x * y^{-1} expanded through the
    nilpotence inverse sum_{k<=n} (1-y)^k in the truncated monoid ring.
    """
    n = f.degree_bound
    dom = f.domain
    cod = f.codomain
    acc = cod.zero()
    pt = a
    for j in range(n + 1):
        acc = cod.add(acc, cod.scale((-1) ** j * comb(n + 1, j + 1), f.evaluate(pt)))
        pt = dom.add(pt, b)
    return acc


def extend_over_group_completion(f: PolyMap, completion=None) -> PolyMap:
    """The unique degree-<=n extension of f to the group completion.

    Free monoid domains keep their Mahler coefficients (binomials make sense
    on all of Z^k).  Finite monoid domains produce a table on the finite
    completion via the closed form, with a consistency check across all
    representations a - b of each group element.
    """
    if isinstance(f.domain, GroupDomain):
        return f
    if not f.certified:
        res = verify_degree(f, f.degree_bound)
        if not res.ok:
            raise ValueError(f"degree {f.degree_bound} not certified: "
                             f"differences along {res.directions} fail at {res.point}")
        f = f.with_certificate(f.degree_bound)
    if isinstance(f.domain, FreeMonoidDomain):
        g = FgAbelianGroup.free(f.domain.rank)
        dom = GroupDomain(g)
        out = PolyMap(dom, f.codomain, f.degree_bound, dict(f.coeffs), certified=True)
        return out
    monoid = f.domain.monoid
    if completion is None:
        completion = group_completion(monoid)
    gplus, i = completion
    dom = GroupDomain(gplus)
    values: dict = {}
    for a in monoid.elements():
        for b in monoid.elements():
            g = gplus.sub(i.apply(a), i.apply(b))
            v = closed_form_extension_value(f, a, b)
            if g in values:
                if values[g] != v:
                    raise AssertionError(f"extension ill-defined at {g}: {values[g]} vs {v}")
            else:
                values[g] = v
    missing = [g for g in gplus.elements() if g not in values]
    if missing:
        raise AssertionError(f"group completion not covered by differences: {missing}")
    coeffs = {dom.split(g)[0]: {(): v} for g, v in values.items()}
    out = PolyMap(dom, f.codomain, f.degree_bound, coeffs)
    res = verify_degree(out, f.degree_bound)
    if not res.ok:
        raise AssertionError("extension lost the degree bound")
    out.certified = True
    for a in monoid.elements():
        if out.evaluate(i.apply(a)) != f.evaluate(a):
            raise AssertionError("extension does not restrict to the original map")
    return out


# --------------------------------------------------------------------------
# composition and quotients


def compose(g: PolyMap, f: PolyMap) -> PolyMap:
    """g after f; degree bounds multiply.

    Requires f's codomain to match g's domain group.  Computed pointwise and
    refit, which is exact because the composite is again polynomial of the
    product degree.
    """
    if not isinstance(g.domain, GroupDomain):
        raise ValueError("outer map must live on a group")
    if not g.domain.group.same_invariants(f.codomain):
        raise ValueError("codomain of the inner map does not match the outer domain")
    if g.degree_bound <= -1 or f.degree_bound <= -1:
        return PolyMap(f.domain, g.codomain, -1, {})
    if g.degree_bound == 0 or f.degree_bound == 0:
        bound = 0
    else:
        bound = g.degree_bound * f.degree_bound
    return PolyMap.fit(f.domain, g.codomain, lambda x: g.evaluate(f.evaluate(x)), bound)


@dataclass(frozen=True)
class QuotientCounterexample:
    relation: Element
    point: object
    value: Element

    @property
    def ok(self):
        return False


def factor_through_quotient(f: PolyMap, rel_gens):
    """Descend f along A -> A/<rel_gens>, or exhibit the obstruction.

    Checks translation invariance f(x + m) = f(x) for every listed generator
    m symbolically (invariance under each generator propagates to the whole
    subgroup they generate).  On success returns the induced certified map on
    the quotient group; on failure a QuotientCounterexample.
    """
    if not isinstance(f.domain, GroupDomain):
        raise ValueError("factor_through_quotient needs a group domain")
    a = f.domain.group
    for m in rel_gens:
        d = cross_difference(f, a._normalize(m))
        if not d.is_zero_map():
            pt, v = _find_nonzero_point(d)
            return QuotientCounterexample(tuple(m), pt, v)
    rows = []
    for i, dtor in enumerate(a.torsion):
        row = [0] * a.num_coords
        row[i] = dtor
        rows.append(row)
    rows.extend(list(a._normalize(m)) for m in rel_gens)
    q = fg_group_from_relations(a.num_coords, rows)
    qdom = GroupDomain(q)

    def lifted(pt):
        raw = q.lift(pt)
        return f.evaluate(a._normalize(raw))

    out = PolyMap.fit(qdom, f.codomain, lifted, max(f.degree_bound, 0))
    res = verify_degree(out, max(f.degree_bound, 0))
    if not res.ok:
        raise AssertionError("induced map lost the degree bound")
    out.certified = True
    return out
