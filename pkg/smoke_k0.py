from polyk0.abgroup import FgAbelianGroup
from polyk0.monoid import CommMonoid
from polyk0.polymap import FreeMonoidDomain, PolyMap, GroupDomain, extend_over_group_completion
from polyk0.k0 import (AdditiveCatSpec, StableCatSpec, K0Group, InducedMapFailure,
                       k0_additive, k0_stable, induced_k0_map, lambda_operation,
                       lambda_and_adams, adams_is_identity_on_ranks,
                       frobenius_discrepancy_map, power_map_on_ranks)

# 1. additive K0 of free pi0 of rank 2
add = k0_additive(AdditiveCatSpec(CommMonoid.free(2)))
assert add.group.invariants() == ((), 2)
assert add.class_of((1, 0)) == (1, 0)
assert add.class_of((2, 3)) == (2, 3)

# 2. stable: impose [e2] = 2[e1]  (triple (x', x, x'') means [x] = [x'] + [x''])
spec = StableCatSpec(AdditiveCatSpec(CommMonoid.free(2)),
                     cofiber_rels=(((1, 0), (0, 1), (1, 0)),))
st = k0_stable(spec)
assert st.group.invariants() == ((), 1), st.group.invariants()
c1 = st.class_of((1, 0))
c2 = st.class_of((0, 1))
assert c2 == st.group.scale(2, c1), (c1, c2)
print("stable quotient:", st.group.invariants(), "e1 ->", c1, "e2 ->", c2)

# 3. induced lambda^2 on K0 = Z (no relations)
z = FgAbelianGroup.free(1)
spec1 = StableCatSpec(AdditiveCatSpec(CommMonoid.free(1)))
k1 = k0_stable(spec1)
lam2 = PolyMap.from_mahler(FreeMonoidDomain(1), z, {(2,): (1,)})
ind = induced_k0_map(lam2, 2, spec1, k1)
assert not isinstance(ind, InducedMapFailure)
assert ind.evaluate((-1,)) == (1,)       # binom(-1,2) = 1
assert ind.evaluate((4,)) == (6,)
print("induced lambda^2 at -1, 4:", ind.evaluate((-1,)), ind.evaluate((4,)))

# 4. failure: collapse [1] = [0] + [0] kills the group; lambda^2 cannot descend
bad = StableCatSpec(AdditiveCatSpec(CommMonoid.free(1)),
                    cofiber_rels=(((0,), (1,), (0,)),))
res = induced_k0_map(lam2, 2, bad, k1)
assert isinstance(res, InducedMapFailure)
print("obstruction:", res.obstruction.relation, res.obstruction.point, res.obstruction.value)

# 5. lambda / adams
ops = lambda_and_adams(5)
assert adams_is_identity_on_ranks(5)
l2 = ops["lambda"][2]
l1 = ops["lambda"][1]
for x in range(-4, 5):
    for y in range(-4, 5):
        lhs = l2.evaluate((x + y,))[0]
        rhs = l2.evaluate((x,))[0] + l1.evaluate((x,))[0] * l1.evaluate((y,))[0] + l2.evaluate((y,))[0]
        assert lhs == rhs, (x, y)
print("whitney sum for lambda^2 holds on [-4,4]^2")

# 6. fermat discrepancy
for p in (2, 3, 5):
    fd = frobenius_discrepancy_map(p)
    for x in range(-20, 21):
        assert (x ** p - x) % p == 0
        assert fd.evaluate((x,)) == ((x ** p - x) // p,), (p, x)
print("fermat discrepancy maps agree on [-20,20] for p=2,3,5")

# 7. power map extension: x -> x^2 extended to Z
pm = power_map_on_ranks(2)
ext = extend_over_group_completion(pm)
assert ext.evaluate((-3,)) == (9,)
assert ext.evaluate((7,)) == (49,)
print("power map extension: (-3) ->", ext.evaluate((-3,)))

# 8. finite pi0: vector-space monoid over F_2 of dim <= 1... use cyclic group Z/3 as monoid
m3 = CommMonoid.cyclic(3)
a3 = k0_additive(AdditiveCatSpec(m3))
assert a3.group.invariants() == ((3,), 0), a3.group.invariants()
assert a3.class_of(0) == a3.group.zero()
assert a3.group.add(a3.class_of(1), a3.class_of(2)) == a3.group.zero()
print("finite pi0 completion:", a3.group.invariants())

print("all k0 smoke checks passed")
