"""Named verification suites, each an end-to-end desk-scale check.

Every suite draws its randomness from a seed derived deterministically from
(config seed, suite name), so runs are bit-identical for a fixed seed.  A
suite never raises on a mathematical failure: it returns the first
counterexample it finds, leaving exceptions for genuine bugs (which are also
captured into the result, so one broken suite cannot take down the rest).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from math import comb, factorial

from . import modp
from .abgroup import FgAbelianGroup
from .characters import SymmetricPolynomial, character, check_divisibility
from .intlinalg import IntMatrix, solve_exact
from .k0 import frobenius_discrepancy_map, lambda_operation
from .monoid import CommMonoid, group_completion
from .monoid_ring import (aug_ideal_power_quotient, free_group_algebra_quotient,
                          invert_monoid_element, passi_dimension_oracle,
                          passi_functor)
from .polymap import (FreeMonoidDomain, GroupDomain, PolyMap,
                      closed_form_extension_value, extend_over_group_completion,
                      gbinom, vanishes_by_grid, verify_degree)
from .rings import INTEGERS, mod_ring
from .simplicial import (ChainComplex, FunctorSpec, apply_functor_levelwise,
                         cech_nerve, dk_gamma, euler_class, is_n_skeletal,
                         moore_complex, normalized_chains, normalized_rank)


@dataclass(frozen=True)
class Config:
    """Shared knobs for suites and the CLI."""

    seed: int = 1729
    box: int = 10
    monoid_cap: int = 64
    fmt: str = "table"

    def __post_init__(self):
        if self.box <= 0 or self.monoid_cap <= 0:
            raise ValueError("caps must be positive")
        if self.fmt not in ("json", "table"):
            raise ValueError("format must be json or table")


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    cases: int
    elapsed: float
    budget: float
    details: dict = field(default_factory=dict)
    counterexample: object = None

    @property
    def ok(self) -> bool:
        return self.passed

    @property
    def within_budget(self) -> bool:
        return self.elapsed < self.budget


def _rng(config: Config, name: str) -> random.Random:
    # string seeding hashes via sha512: stable across processes and platforms
    return random.Random(f"{config.seed}:{name}")


# --------------------------------------------------------------------------
# 1. binomial maps extend uniquely over the group completion of N


def _suite_passi(config: Config):
    z = FgAbelianGroup.free(1)
    dom = FreeMonoidDomain(1)
    cases = 0
    details = {"degrees": "0..4", "window": "[-10, 10]"}
    for i in range(5):
        f = PolyMap.from_mahler(dom, z, {(i,): (1,)})
        ext = extend_over_group_completion(f)
        for x in range(-10, 11):
            got = ext.evaluate((x,))
            if got != (gbinom(x, i),):
                return cases, details, {"i": i, "x": x, "got": got,
                                        "want": (gbinom(x, i),)}
            cases += 1
        # uniqueness: an independently fitted degree-<=i extension has the
        # same Mahler table, and their difference dies on the spanning grid
        alt = PolyMap.fit(GroupDomain(z), z, lambda pt, ii=i: (gbinom(pt[0], ii),), i)
        if ext.coeffs != alt.coeffs:
            return cases, details, {"i": i, "reason": "extension not unique",
                                    "got": ext.coeffs, "want": alt.coeffs}
        diff = PolyMap.fit(GroupDomain(z), z,
                           lambda pt: z.sub(ext.evaluate(pt), alt.evaluate(pt)), i)
        if not (diff.is_zero_map() and vanishes_by_grid(diff, i)):
            return cases, details, {"i": i, "reason": "difference fails grid determinacy"}
        cases += 1
    return cases, details, None


# --------------------------------------------------------------------------
# 2. augmentation-power quotients of N match the completion-side quotients


def _suite_quotient_ring(config: Config):
    cases = 0
    details = {"truncations": "n <= 6", "finite_checks": "Z/N, N in {4,5,6}, n <= 2"}
    for n in range(7):
        q = aug_ideal_power_quotient(CommMonoid.free(1), n)
        torsion, free_rank = q.invariants()
        if torsion or free_rank != n + 1:
            return cases, details, {"n": n, "path": "monoid",
                                    "invariants": (torsion, free_rank)}
        grp, monos, embed = free_group_algebra_quotient(1, n)
        t2, f2 = grp.invariants()
        if t2 or f2 != n + 1:
            return cases, details, {"n": n, "path": "completion",
                                    "invariants": (t2, f2)}
        # the comparison map sends the monoid-side basis to a basis
        cols = [list(embed(m)) for m in q._mono_index["list"]]
        mat = IntMatrix.from_rows(
            [[cols[j][i] for j in range(len(cols))] for i in range(grp.num_coords)],
            len(cols))
        if abs(mat.det()) != 1:
            return cases, details, {"n": n, "reason": "comparison map not invertible",
                                    "det": mat.det()}
        cases += 1
    # a finite group equals its own completion; both quotient paths agree
    for big_n in (4, 5, 6):
        for n in range(3):
            m = CommMonoid.cyclic(big_n)
            direct = aug_ideal_power_quotient(m, n).invariants()
            comp, _ = group_completion(m)
            elems = list(comp.elements())
            index = {e: i for i, e in enumerate(elems)}
            table = [[index[comp.add(a, b)] for b in elems] for a in elems]
            again = CommMonoid.finite(table, identity=index[comp.zero()],
                                      cap=config.monoid_cap)
            through = aug_ideal_power_quotient(again, n).invariants()
            if direct != through:
                return cases, details, {"N": big_n, "n": n, "direct": direct,
                                        "through_completion": through}
            cases += 1
    return cases, details, None


# --------------------------------------------------------------------------
# 3. closed-form extension formula vs symbolic and quotient-ring evaluation


def _suite_difference_formula(config: Config):
    rng = _rng(config, "difference-formula")
    z = FgAbelianGroup.free(1)
    dom = FreeMonoidDomain(1)
    cases = 0
    details = {"trials": 100, "max_degree": 3}
    quotients = {n: aug_ideal_power_quotient(CommMonoid.free(1), n) for n in range(4)}
    for _ in range(100):
        n = rng.randrange(0, 4)
        table = {(k,): (rng.randrange(-4, 5),) for k in range(n + 1)}
        f = PolyMap.from_mahler(dom, z, table, degree=n)
        x = rng.randrange(0, config.box + 1)
        y = rng.randrange(0, config.box + 1)
        ext = extend_over_group_completion(f)
        symbolic = ext.evaluate((x - y,))
        closed = closed_form_extension_value(f, (x,), (y,))
        # genuine quotient-ring path: apply the linearization to x * y^{-1}
        q = quotients[n]
        w = q.mul(q.class_of((x,)), invert_monoid_element(q, (y,)))
        linearized = (sum(wj * table.get((j,), (0,))[0] for j, wj in enumerate(w)),)
        if not (symbolic == closed == linearized):
            return cases, details, {"n": n, "coeffs": table, "x": x, "y": y,
                                    "symbolic": symbolic, "closed_form": closed,
                                    "quotient_ring": linearized}
        cases += 1
    return cases, details, None


# --------------------------------------------------------------------------
# 4. tensor-minus-twist characters are divisible by p, with exact quotient


def _suite_character_divisibility(config: Config):
    cases = 0
    details = {"primes": (2, 3, 5), "nvars": "p..p+2"}
    for p in (2, 3, 5):
        for n in range(p, p + 3):
            a = character(FunctorSpec.tensor(p), n, p)
            b = character(FunctorSpec.frobenius_twist(p), n, p)
            r = check_divisibility(a, b, p)
            if not isinstance(r, SymmetricPolynomial):
                return cases, details, {"p": p, "nvars": n, "failure": str(r)}
            if r * p + b != a:
                return cases, details, {"p": p, "nvars": n,
                                        "reason": "quotient does not multiply back"}
            # independent oracle: multinomial coefficients of (x1+...+xn)^p
            for mu, c in a.coefficients.items():
                m = factorial(p)
                for e in mu:
                    m //= factorial(e)
                if c != m:
                    return cases, details, {"p": p, "nvars": n, "monomial": mu,
                                            "coefficient": c, "multinomial": m}
                delta = 1 if mu == (p,) else 0
                if (m - delta) % p:
                    return cases, details, {"p": p, "nvars": n, "monomial": mu,
                                            "reason": "oracle says not divisible"}
                cases += 1
    return cases, details, None


# --------------------------------------------------------------------------
# 5. (x^p - x)/p is an integer-valued polynomial map of degree p


def _suite_fermat_quotient(config: Config):
    cases = 0
    details = {"primes": (2, 3, 5), "window": "[-20, 20]"}
    for p in (2, 3, 5):
        g = frobenius_discrepancy_map(p)
        for x in range(-20, 21):
            num = x ** p - x
            if num % p:
                return cases, details, {"p": p, "x": x, "reason": "not divisible"}
            if g.evaluate((x,)) != (num // p,):
                return cases, details, {"p": p, "x": x, "got": g.evaluate((x,)),
                                        "want": (num // p,)}
            cases += 1
        res = verify_degree(g, p)
        if not res.ok:
            return cases, details, {"p": p, "reason": "degree check failed",
                                    "counterexample": res}
        cases += 1
    return cases, details, None


# --------------------------------------------------------------------------
# 6. Dold-Kan roundtrip is the identity on bounded complexes


def random_complex(rng: random.Random, ring, top: int = 3,
                   maxrank: int = 4) -> ChainComplex:
    """Sum of elementary complexes conjugated by small unimodular matrices."""
    dims = [0] * (top + 1)
    pieces = []          # (degree j, multiplier m) meaning C_{j+1} -m-> C_j
    for _ in range(rng.randrange(1, maxrank + 2)):
        if rng.random() < 0.3:
            j = rng.randrange(0, top + 1)
            if dims[j] < maxrank:
                dims[j] += 1
                pieces.append((j, None))
        else:
            j = rng.randrange(0, top)
            if dims[j] < maxrank and dims[j + 1] < maxrank:
                pieces.append((j, rng.choice([0, 1, 2, 2, 3, 4, 6])))
                dims[j] += 1
                dims[j + 1] += 1
    if all(d == 0 for d in dims):
        dims[0] = 1
        pieces.append((0, None))
    slots = [[] for _ in range(top + 1)]
    for idx, (j, m) in enumerate(pieces):
        slots[j].append((idx, "low"))
        if m is not None:
            slots[j + 1].append((idx, "high"))
    diffs = []
    for k in range(1, top + 1):
        d = [[0] * dims[k] for _ in range(dims[k - 1])]
        for col, (idx, role) in enumerate(slots[k]):
            if role != "high":
                continue
            row = next(r for r, (i2, role2) in enumerate(slots[k - 1])
                       if i2 == idx and role2 == "low")
            d[row][col] = pieces[idx][1]
        diffs.append(IntMatrix.from_rows(d, dims[k]))

    def unimodular(n):
        u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for _ in range(2 * n):
            a, b = rng.randrange(n), rng.randrange(n)
            if a != b:
                c = rng.choice([-1, 1])
                for j in range(n):
                    u[a][j] += c * u[b][j]
        return IntMatrix.from_rows(u, n)

    us = [unimodular(dims[k]) for k in range(top + 1)]
    uinv = [solve_exact(us[k], IntMatrix.identity(dims[k])) if dims[k] else us[k]
            for k in range(top + 1)]
    conj = [us[k - 1] @ diffs[k - 1] @ uinv[k] for k in range(1, top + 1)]
    return ChainComplex(ring, tuple(dims), tuple(conj))


def _suite_dold_kan_roundtrip(config: Config):
    rng = _rng(config, "dold-kan-roundtrip")
    cases = 0
    details = {"complexes": 200, "max_rank": 4, "degrees": "0..3"}
    for trial in range(200):
        ring = INTEGERS if trial % 2 == 0 else mod_ring(rng.choice([2, 3, 5]))
        c = random_complex(rng, ring)
        back = normalized_chains(dk_gamma(c)).trim()
        ct = c.trim()
        if back.dims != ct.dims or back.diffs != ct.diffs:
            return cases, details, {"trial": trial, "ring": str(ring),
                                    "dims": ct.dims, "roundtrip_dims": back.dims}
        for k in range(ct.top + 1):
            if back.homology(k).invariants() != ct.homology(k).invariants():
                return cases, details, {"trial": trial, "degree": k,
                                        "reason": "homology mismatch"}
        # independent oracle on a sample: the Moore complex (all faces
        # alternating) has the same homology as the normalized chains
        if ring.modulus and trial % 10 == 1:
            mo = moore_complex(dk_gamma(c))
            for k in range(ct.top + 1):
                if mo.homology(k).invariants() != ct.homology(k).invariants():
                    return cases, details, {"trial": trial, "degree": k,
                                            "reason": "Moore complex disagrees"}
        cases += 1
    return cases, details, None


# --------------------------------------------------------------------------
# 7. degree-d functors turn 1-skeletal nerves into d-skeletal modules


_SKELETAL_FUNCTORS = (FunctorSpec.sym(2), FunctorSpec.sym(3),
                      FunctorSpec.ext(2), FunctorSpec.tensor(2))


def _suite_skeletality(config: Config):
    rng = _rng(config, "skeletality")
    cases = 0
    details = {"nerves": 50, "functors": [s.label() for s in _SKELETAL_FUNCTORS],
               "rings": ("Z/2", "Z/3")}
    for trial in range(50):
        ring = mod_ring(2 if trial % 2 == 0 else 3)
        rows = rng.randrange(1, 4)
        cols = rng.randrange(1, 4)
        f = IntMatrix.from_rows([[rng.randrange(-2, 3) for _ in range(cols)]
                                 for _ in range(rows)], cols)
        nerve = cech_nerve(f, ring=ring, top=4)
        for spec in _SKELETAL_FUNCTORS:
            d = spec.polynomial_degree()
            y = apply_functor_levelwise(spec, nerve)
            if not is_n_skeletal(y, d):
                return cases, details, {"trial": trial, "functor": spec.label(),
                                        "matrix": f, "ring": str(ring),
                                        "reason": f"not {d}-skeletal"}
            if normalized_rank(y, d) > 0 and is_n_skeletal(y, d - 1):
                return cases, details, {"trial": trial, "functor": spec.label(),
                                        "matrix": f, "ring": str(ring),
                                        "reason": f"{d - 1}-skeletal despite degree-{d} part"}
            cases += 1
    return cases, details, None


# --------------------------------------------------------------------------
# 8. Euler classes ignore which short exact sequence presents the cofiber


_EULER_FUNCTORS = (FunctorSpec.sym(2), FunctorSpec.ext(2), FunctorSpec.tensor(2))


def _euler_of(spec: FunctorSpec, f: IntMatrix, ring) -> int:
    return euler_class(apply_functor_levelwise(spec, cech_nerve(f, ring=ring, top=3)),
                       spec.polynomial_degree())


def _suite_euler_additivity(config: Config):
    rng = _rng(config, "euler-additivity")
    ring = mod_ring(2)
    cases = 0
    details = {"sequences": 50, "functors": [s.label() for s in _EULER_FUNCTORS]}
    for trial in range(50):
        a = rng.randrange(1, 4)
        c = rng.randrange(1, 4)
        while True:
            f = IntMatrix.from_rows([[rng.randrange(2) for _ in range(a)]
                                     for _ in range(a + c)], a)
            if len(modp.rref(f, 2)[1]) == a:
                break
        split = IntMatrix.from_rows([[1 if i == j else 0 for j in range(a)]
                                     for i in range(a + c)], a)
        for spec in _EULER_FUNCTORS:
            e_any = _euler_of(spec, f, ring)
            e_split = _euler_of(spec, split, ring)
            if e_any != e_split:
                return cases, details, {"trial": trial, "functor": spec.label(),
                                        "matrix": f, "euler": e_any,
                                        "split_euler": e_split}
            cases += 1
    # pinned value: sym^2 of the nerve of k -> k^2 has Euler class 3 - 3 + 1
    pinned = _euler_of(FunctorSpec.sym(2), IntMatrix.from_rows([[1], [0]], 1), ring)
    if pinned != 1:
        return cases, details, {"reason": "pinned sym:2 value", "got": pinned, "want": 1}
    cases += 1
    return cases, details, None


# --------------------------------------------------------------------------
# 9. lambda operations on the rank ring


def _suite_lambda_operations(config: Config):
    cases = 0
    details = {"identities": "lambda^2(-1), lambda^3(-1), lambda^2(-n), sum rule d<=4 on [0,6]^2"}
    lam = {i: lambda_operation(i) for i in range(5)}

    def ev(i, x):
        return lam[i].evaluate((x,))[0]

    if ev(2, -1) != 1:
        return cases, details, {"check": "lambda^2(-1)", "got": ev(2, -1), "want": 1}
    cases += 1
    if ev(3, -1) != -1:
        return cases, details, {"check": "lambda^3(-1)", "got": ev(3, -1), "want": -1}
    cases += 1
    for n in range(11):
        if ev(2, -n) != n * (n + 1) // 2:
            return cases, details, {"check": f"lambda^2(-{n})", "got": ev(2, -n),
                                    "want": n * (n + 1) // 2}
        cases += 1
    for d in range(5):
        for x in range(7):
            for y in range(7):
                lhs = ev(d, x + y)
                rhs = sum(ev(i, x) * ev(d - i, y) for i in range(d + 1))
                if lhs != rhs:
                    return cases, details, {"check": "sum rule", "d": d, "x": x,
                                            "y": y, "lhs": lhs, "rhs": rhs}
                cases += 1
    return cases, details, None


# --------------------------------------------------------------------------
# 10. weight-space dimensions of the truncated group-algebra functors


def _suite_passi_dimensions(config: Config):
    cases = 0
    details = {"primes": (2, 3), "k": "0..3", "n": "0..4"}
    for p in (2, 3):
        for k in range(4):
            for n in range(5):
                _, dim = passi_functor(k, n, p, cap=config.monoid_cap)
                want = passi_dimension_oracle(k, n, p)
                if dim != want:
                    return cases, details, {"p": p, "k": k, "n": n,
                                            "dim": dim, "oracle": want}
                cases += 1
    return cases, details, None


# --------------------------------------------------------------------------
# registry and runners


SUITES = (
    ("passi", 1.0, _suite_passi,
     "binomial maps extend uniquely from N to Z"),
    ("quotient-ring", 5.0, _suite_quotient_ring,
     "augmentation-power quotients agree across the completion"),
    ("difference-formula", 5.0, _suite_difference_formula,
     "closed-form extension equals symbolic and quotient-ring evaluation"),
    ("character-divisibility", 5.0, _suite_character_divisibility,
     "tensor minus twist characters are divisible by p"),
    ("fermat-quotient", 1.0, _suite_fermat_quotient,
     "(x^p - x)/p is an integer-valued degree-p map"),
    ("dold-kan-roundtrip", 30.0, _suite_dold_kan_roundtrip,
     "normalized chains invert the simplicial thickening on the nose"),
    ("skeletality", 60.0, _suite_skeletality,
     "degree-d functors send 1-skeletal nerves to d-skeletal modules"),
    ("euler-additivity", 60.0, _suite_euler_additivity,
     "Euler classes only depend on the cofiber class"),
    ("lambda-operations", 1.0, _suite_lambda_operations,
     "lambda operations satisfy the negative-rank and sum rules"),
    ("passi-dimensions", 5.0, _suite_passi_dimensions,
     "truncated group-algebra dimensions match the counting oracle"),
)

SUITE_NAMES = tuple(name for name, _, _, _ in SUITES)


def run_suite(name: str, config: Config | None = None) -> SuiteResult:
    config = config or Config()
    for sname, budget, fn, _ in SUITES:
        if sname == name:
            t0 = time.perf_counter()
            try:
                cases, details, counterexample = fn(config)
            except Exception as exc:    # a crash is a failure, not a pass
                elapsed = time.perf_counter() - t0
                return SuiteResult(name, False, 0, elapsed, budget,
                                   {"error": f"{type(exc).__name__}: {exc}"}, None)
            elapsed = time.perf_counter() - t0
            return SuiteResult(name, counterexample is None, cases, elapsed,
                               budget, details, counterexample)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")


def run_all(config: Config | None = None, names=None) -> list[SuiteResult]:
    config = config or Config()
    chosen = list(names) if names else list(SUITE_NAMES)
    for n in chosen:
        if n not in SUITE_NAMES:
            raise ValueError(f"unknown suite {n!r}; choose from {', '.join(SUITE_NAMES)}")
    return [run_suite(n, config) for n in chosen]
