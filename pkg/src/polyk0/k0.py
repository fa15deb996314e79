"""K-theory of additive and stable category skeletons, at the level of pi0.

An additive category is summarized by the commutative monoid of isomorphism
classes under direct sum; K0 is its group completion.  A stable category
additionally remembers cofiber relations [X] = [X'] + [X''] and K0 divides by
them.  Polynomial functors induce polynomial maps on K0 by extending over the
completion and descending along the cofiber-relation subgroup.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abgroup import Element, FgAbelianGroup
from .monoid import CommMonoid, MonoidHom, group_completion
from .polymap import (GroupDomain, PolyMap, QuotientCounterexample,
                      extend_over_group_completion, factor_through_quotient,
                      gbinom, verify_degree)


@dataclass(frozen=True)
class AdditiveCatSpec:
    """pi0 of an additive category: iso classes under direct sum."""

    pi0: CommMonoid


@dataclass(frozen=True)
class StableCatSpec:
    """Additive data plus cofiber relations (x', x, x'') meaning [x]=[x']+[x'']."""

    additive: AdditiveCatSpec
    cofiber_rels: tuple = ()


@dataclass(frozen=True)
class K0Group:
    group: FgAbelianGroup
    classes: tuple            # class_of for each pi0 element / generator images
    pi0: CommMonoid
    relation_elements: tuple = ()   # cofiber combinations inside the additive K0
    additive_group: FgAbelianGroup | None = None

    def class_of(self, x) -> Element:
        if self.pi0.kind == "finite":
            return self.classes[x]
        out = self.group.zero()
        for c, img in zip(x, self.classes):
            if c:
                out = self.group.add(out, self.group.scale(c, img))
        return out


def k0_additive(spec: AdditiveCatSpec) -> K0Group:
    """K0 of an additive category: the group completion of pi0."""
    g, i = group_completion(spec.pi0)
    return K0Group(g, tuple(i.values), spec.pi0, additive_group=g)


def k0_stable(spec: StableCatSpec) -> K0Group:
    """K0 of a stable category: additive K0 modulo cofiber relations."""
    add = k0_additive(spec.additive)
    g = add.group
    pi0 = spec.additive.pi0
    rels = []
    for (xp, x, xpp) in spec.cofiber_rels:
        r = g.sub(g.add(add.class_of(xp), add.class_of(xpp)), add.class_of(x))
        rels.append(r)
    rows = []
    for i, d in enumerate(g.torsion):
        row = [0] * g.num_coords
        row[i] = d
        rows.append(row)
    rows.extend(list(r) for r in rels)
    from .abgroup import fg_group_from_relations
    q = fg_group_from_relations(g.num_coords, rows)

    def project(el: Element) -> Element:
        return q.reduce(list(el))

    if pi0.kind == "finite":
        classes = tuple(project(add.class_of(a)) for a in pi0.elements())
    else:
        classes = tuple(project(img) for img in add.classes)
    return K0Group(q, classes, pi0, relation_elements=tuple(rels), additive_group=g)


@dataclass(frozen=True)
class InducedMapFailure:
    """A cofiber relation the functor does not respect on K0."""

    obstruction: QuotientCounterexample

    @property
    def ok(self):
        return False


def induced_k0_map(f: PolyMap, n: int, source: StableCatSpec, target_k0: K0Group):
    """The map K0(C) -> K0(D) induced by a degree-<=n functor on pi0.

    f sends pi0 of the source to the target K0 group and must be polynomial
    of degree <= n.  The induced map is the extension over group completion
    followed by descent along the cofiber-relation subgroup; failure to
    descend is reported, not raised.
    """
    res = verify_degree(f, n)
    if not res.ok:
        raise ValueError(f"map is not polynomial of degree <= {n}: "
                         f"differences along {res.directions} fail at {res.point}")
    f = f.with_certificate(n)
    stable = k0_stable(source)
    pi0 = source.additive.pi0
    comp = group_completion(pi0)
    fplus = extend_over_group_completion(f, completion=comp)
    out = factor_through_quotient(fplus, list(stable.relation_elements))
    if isinstance(out, QuotientCounterexample):
        return InducedMapFailure(out)
    # sanity: the square against class maps commutes
    if pi0.kind == "finite":
        sample = list(pi0.elements())
    else:
        sample = pi0.generators()
    for a in sample:
        lhs = out.evaluate(stable.class_of(a))
        rhs = f.evaluate(a)
        if lhs != rhs:
            raise AssertionError(f"induced map disagrees with the functor on class of {a}")
    return out


# --------------------------------------------------------------------------
# lambda and Adams operations on the rank ring


def lambda_operation(i: int) -> PolyMap:
    """lambda^i on K0(finite free modules) = Z: x -> binom(x, i)."""
    if i < 0:
        raise ValueError("lambda index must be >= 0")
    z = FgAbelianGroup.free(1)
    if i == 0:
        return PolyMap.constant(GroupDomain(z), z, (1,))
    return PolyMap.from_mahler(GroupDomain(z), z, {(i,): (1,)})


def lambda_and_adams(i_max: int) -> dict:
    """The lambda operations up to i_max and the Adams operations they generate.

    psi^k is reconstructed from the Newton recurrence
        psi^k = lambda^1 psi^{k-1} - lambda^2 psi^{k-2} + ... + (-1)^{k-1} k lambda^k
    (products taken pointwise in the ring Z) and then refit as a polynomial
    map.  On the rank ring every psi^k comes out as the identity.
    """
    if i_max < 1:
        raise ValueError("need i_max >= 1")
    z = FgAbelianGroup.free(1)
    dom = GroupDomain(z)
    lambdas = {i: lambda_operation(i) for i in range(0, i_max + 1)}

    def lam(i, x):
        return lambdas[i].evaluate((x,))[0]

    def psi_value(k, x):
        acc = 0
        for i in range(1, k):
            acc += (-1) ** (i - 1) * lam(i, x) * psi_value(k - i, x)
        acc += (-1) ** (k - 1) * k * lam(k, x)
        return acc

    adams = {}
    for k in range(1, i_max + 1):
        adams[k] = PolyMap.fit(dom, z, lambda p, kk=k: (psi_value(kk, p[0]),), k)
    return {"lambda": lambdas, "adams": adams}


def adams_is_identity_on_ranks(i_max: int, lo: int = -10, hi: int = 10) -> bool:
    ops = lambda_and_adams(i_max)
    for k in range(1, i_max + 1):
        psi = ops["adams"][k]
        for x in range(lo, hi + 1):
            if psi.evaluate((x,)) != (x,):
                return False
    return True


def frobenius_discrepancy_map(p: int) -> PolyMap:
    """(x^p - x)/p as an integer-valued polynomial map on Z.

    psi^p(x) = x on ranks while the p-th power map is x^p; their difference
    is divisible by p as an integer-valued polynomial (Fermat), so the
    quotient is again a polynomial map over Z.
    """
    z = FgAbelianGroup.free(1)

    def value(pt):
        x = pt[0]
        d = x ** p - x
        if d % p:
            raise AssertionError(f"Fermat congruence fails at {x}")
        return (d // p,)

    return PolyMap.fit(GroupDomain(z), z, value, p)


def power_map_on_ranks(p: int) -> PolyMap:
    """The functor 'p-fold tensor power' on ranks: x -> x^p, as a PolyMap on N."""
    from .polymap import FreeMonoidDomain
    z = FgAbelianGroup.free(1)
    return PolyMap.fit(FreeMonoidDomain(1), z, lambda pt: (pt[0] ** p,), p)
