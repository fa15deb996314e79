"""Symmetric-function characters of homogeneous degree-p matrix functors.

A character is stored in the monomial symmetric basis: keys are exponent
partitions (sorted descending, zeros trimmed), values are exact integers.
The dense expansion over explicit variables exists only to multiply two
characters and to cross-check symmetry; canonical storage stays in the
m-basis, where equality is literal.

The headline computation: the tensor-power character minus the twist
character is divisible by p, with an explicit integer quotient.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .simplicial import FunctorSpec


def _partitions(total: int, max_parts: int, max_part: int | None = None):
    """Partitions of `total` into at most `max_parts` parts, descending."""
    if max_part is None:
        max_part = total
    if total == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in _partitions(total - first, max_parts - 1, first):
            yield (first,) + rest


@dataclass(frozen=True)
class SymmetricPolynomial:
    """Homogeneous symmetric polynomial in the monomial basis.

    `coefficients` maps descending exponent partitions to integers; every
    key sums to `degree` and uses at most `nvars` variables.  The zero
    polynomial keeps its declared degree so arithmetic stays homogeneous.
    """

    nvars: int
    degree: int
    coefficients: dict

    def __post_init__(self):
        if self.nvars < 0 or self.degree < 0:
            raise ValueError("negative arity or degree")
        clean = {}
        for key, val in self.coefficients.items():
            key = tuple(key)
            if type(val) is not int:
                raise ValueError("coefficients must be ints")
            if val == 0:
                continue
            if any(type(e) is not int or e <= 0 for e in key):
                raise ValueError("exponents must be positive ints")
            if tuple(sorted(key, reverse=True)) != key:
                raise ValueError("exponent keys must be sorted descending")
            if len(key) > self.nvars:
                raise ValueError("monomial uses more variables than declared")
            if sum(key) != self.degree:
                raise ValueError("non-homogeneous term")
            clean[key] = val
        ordered = {k: clean[k] for k in sorted(clean, reverse=True)}
        object.__setattr__(self, "coefficients", ordered)

    # ---------------------------------------------------------------- builders

    @staticmethod
    def zero(nvars: int, degree: int) -> "SymmetricPolynomial":
        return SymmetricPolynomial(nvars, degree, {})

    @staticmethod
    def one(nvars: int) -> "SymmetricPolynomial":
        return SymmetricPolynomial(nvars, 0, {(): 1})

    @staticmethod
    def monomial(nvars: int, mu) -> "SymmetricPolynomial":
        """m_mu: the orbit sum of the monomial with exponent partition mu."""
        mu = tuple(sorted((int(e) for e in mu), reverse=True))
        return SymmetricPolynomial(nvars, sum(mu), {mu: 1})

    @staticmethod
    def elementary(nvars: int, k: int) -> "SymmetricPolynomial":
        """e_k; zero when k exceeds the number of variables."""
        if k == 0:
            return SymmetricPolynomial.one(nvars)
        if k > nvars:
            return SymmetricPolynomial.zero(nvars, k)
        return SymmetricPolynomial(nvars, k, {(1,) * k: 1})

    @staticmethod
    def complete_homogeneous(nvars: int, k: int) -> "SymmetricPolynomial":
        """h_k: every monomial of degree k once."""
        if k == 0:
            return SymmetricPolynomial.one(nvars)
        coeffs = {mu: 1 for mu in _partitions(k, nvars)}
        return SymmetricPolynomial(nvars, k, coeffs)

    @staticmethod
    def power_sum(nvars: int, k: int) -> "SymmetricPolynomial":
        """p_k = x_1^k + ... + x_n^k."""
        if k == 0:
            raise ValueError("power sums start at k = 1")
        return SymmetricPolynomial(nvars, k, {(k,): 1})

    # ------------------------------------------------------------- arithmetic

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    def _check_compatible(self, other: "SymmetricPolynomial"):
        if self.nvars != other.nvars:
            raise ValueError("mixed variable counts")
        if self.degree != other.degree:
            raise ValueError("mixed degrees in a sum")

    def __add__(self, other: "SymmetricPolynomial") -> "SymmetricPolynomial":
        self._check_compatible(other)
        out = dict(self.coefficients)
        for k, v in other.coefficients.items():
            out[k] = out.get(k, 0) + v
        return SymmetricPolynomial(self.nvars, self.degree, out)

    def __neg__(self) -> "SymmetricPolynomial":
        return SymmetricPolynomial(self.nvars, self.degree,
                                   {k: -v for k, v in self.coefficients.items()})

    def __sub__(self, other: "SymmetricPolynomial") -> "SymmetricPolynomial":
        return self + (-other)

    def __mul__(self, other):
        if type(other) is int:
            return SymmetricPolynomial(self.nvars, self.degree,
                                       {k: v * other for k, v in self.coefficients.items()})
        if not isinstance(other, SymmetricPolynomial):
            return NotImplemented
        if self.nvars != other.nvars:
            raise ValueError("mixed variable counts")
        da, db = self.dense(), other.dense()
        out: dict = {}
        for ka, va in da.items():
            for kb, vb in db.items():
                key = tuple(x + y for x, y in zip(ka, kb))
                out[key] = out.get(key, 0) + va * vb
        return SymmetricPolynomial.from_dense(self.nvars, out,
                                              self.degree + other.degree)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SymmetricPolynomial":
        if k < 0:
            raise ValueError("negative power")
        out = SymmetricPolynomial.one(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def divide_exact(self, d: int) -> "SymmetricPolynomial":
        """Divide every coefficient by d; raise if any is not divisible."""
        out = {}
        for k, v in self.coefficients.items():
            q, r = divmod(v, d)
            if r:
                raise ValueError(f"coefficient {v} of m{k} not divisible by {d}")
            out[k] = q
        return SymmetricPolynomial(self.nvars, self.degree, out)

    # ---------------------------------------------------- dense expansion

    def dense(self) -> dict:
        """Expand to full exponent vectors (one slot per variable)."""
        out: dict = {}
        for key, val in self.coefficients.items():
            padded = key + (0,) * (self.nvars - len(key))
            for perm in set(permutations(padded)):
                out[perm] = val
        return out

    @staticmethod
    def from_dense(nvars: int, dense: dict,
                   degree: int | None = None) -> "SymmetricPolynomial":
        """Collect a dense expansion back to the monomial basis.

        Verifies symmetry on the way in: every monomial orbit must carry one
        shared coefficient, with no member missing.
        """
        canon_vals: dict = {}
        for key, val in dense.items():
            if val == 0:
                continue
            if len(key) != nvars:
                raise ValueError("dense keys need one exponent per variable")
            canon = tuple(sorted((e for e in key if e), reverse=True))
            if canon in canon_vals:
                if canon_vals[canon] != val:
                    raise ValueError("dense form is not symmetric")
            else:
                canon_vals[canon] = val
        for canon, val in canon_vals.items():
            padded = canon + (0,) * (nvars - len(canon))
            for perm in set(permutations(padded)):
                if dense.get(perm, 0) != val:
                    raise ValueError("dense form is not symmetric")
        if degree is None:
            if not canon_vals:
                raise ValueError("cannot infer the degree of an empty dense form")
            degree = sum(next(iter(canon_vals)))
        return SymmetricPolynomial(nvars, degree, canon_vals)

    def restrict(self, new_nvars: int) -> "SymmetricPolynomial":
        """Set the trailing variables to zero, keeping `new_nvars` of them."""
        if not 0 <= new_nvars <= self.nvars:
            raise ValueError("can only restrict to fewer variables")
        kept = {k: v for k, v in self.coefficients.items() if len(k) <= new_nvars}
        return SymmetricPolynomial(new_nvars, self.degree, kept)

    # ------------------------------------------------------------- display

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for key in self.coefficients:      # already canonically ordered
            c = self.coefficients[key]
            base = "m(" + ",".join(str(e) for e in key) + ")" if key else "1"
            mag = base if abs(c) == 1 else f"{abs(c)}*{base}"
            if not parts:
                parts.append(mag if c > 0 else f"-{mag}")
            else:
                parts.append(f"+ {mag}" if c > 0 else f"- {mag}")
        return " ".join(parts)


# --------------------------------------------------------------------------
# characters of the degree-p functors


def character(spec: FunctorSpec, nvars: int, p: int) -> SymmetricPolynomial:
    """Character of a homogeneous degree-p functor on an nvars-dim space.

    The character records the diagonal torus weights of F(k^n): the twist
    contributes the p-th power sum, the p-fold tensor power the p-th power
    of e_1, and SYM / EXT the complete homogeneous and elementary basis
    elements.  nvars >= p keeps the answer faithful to the functor.
    """
    if nvars < p:
        raise ValueError(f"need at least {p} variables to determine a degree-{p} character")
    if spec.kind not in ("SYM", "EXT", "TENSOR", "FROBENIUS_TWIST"):
        raise ValueError(f"{spec.label()} is not homogeneous; no single character")
    if spec.degree != p:
        raise ValueError(f"{spec.label()} is homogeneous of degree {spec.degree}, not {p}")
    if spec.kind == "FROBENIUS_TWIST":
        return SymmetricPolynomial.power_sum(nvars, p)
    if spec.kind == "TENSOR":
        return SymmetricPolynomial.elementary(nvars, 1) ** p
    if spec.kind == "SYM":
        return SymmetricPolynomial.complete_homogeneous(nvars, p)
    return SymmetricPolynomial.elementary(nvars, p)


@dataclass(frozen=True)
class DivisibilityFailure:
    """First monomial whose coefficient is not divisible."""

    monomial: tuple
    coefficient: int
    modulus: int

    @property
    def ok(self) -> bool:
        return False

    def __str__(self) -> str:
        key = ",".join(str(e) for e in self.monomial)
        return f"coefficient {self.coefficient} of m({key}) is not divisible by {self.modulus}"


def check_divisibility(a: SymmetricPolynomial, b: SymmetricPolynomial, p: int):
    """Exact quotient (a - b)/p, or the first non-divisible monomial.

    Returns the quotient SymmetricPolynomial on success and a
    DivisibilityFailure (never an exception) when some coefficient of the
    difference is not a multiple of p.
    """
    if a.nvars != b.nvars or a.degree != b.degree:
        raise ValueError("operands must share variable count and degree")
    diff = a - b
    for key in diff.coefficients:          # canonical term order
        c = diff.coefficients[key]
        if c % p:
            return DivisibilityFailure(key, c, p)
    return diff.divide_exact(p)


# --------------------------------------------------------------------------
# Newton's identities

def _exact_div(value, k: int):
    if isinstance(value, SymmetricPolynomial):
        return value.divide_exact(k)
    q, r = divmod(value, k)
    if r:
        raise ValueError(f"{value} not divisible by {k}")
    return q


def power_to_elementary(powersums) -> list:
    """Convert p_1..p_m to e_1..e_m via Newton's identities.

    Works on any values with +, -, * (integers, SymmetricPolynomials);
    the division by k in k*e_k = sum (-1)^(i-1) e_{k-i} p_i must be exact.
    """
    ps = list(powersums)
    elems: list = []
    for k in range(1, len(ps) + 1):
        acc = ps[k - 1] if k % 2 == 1 else -ps[k - 1]
        for i in range(1, k):
            term = elems[k - i - 1] * ps[i - 1]
            acc = acc + term if i % 2 == 1 else acc - term
        elems.append(_exact_div(acc, k))
    return elems


def elementary_to_power(elementaries) -> list:
    """Convert e_1..e_m to p_1..p_m, the inverse of power_to_elementary."""
    es = list(elementaries)
    powers: list = []
    for k in range(1, len(es) + 1):
        lead = k * es[k - 1]
        acc = lead if k % 2 == 1 else -lead
        for i in range(1, k):
            term = es[i - 1] * powers[k - i - 1]
            acc = acc + term if i % 2 == 1 else acc - term
        powers.append(acc)
    return powers
