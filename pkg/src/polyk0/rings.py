"""Coefficient rings: the integers, or integers mod m."""

from __future__ import annotations

from dataclasses import dataclass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class CoefficientRing:
    """modulus == 0 means Z; modulus == m >= 2 means Z/m."""

    modulus: int = 0

    def __post_init__(self):
        if self.modulus < 0 or self.modulus == 1:
            raise ValueError("modulus must be 0 (integers) or >= 2")

    @property
    def is_integers(self) -> bool:
        return self.modulus == 0

    @property
    def is_prime_field(self) -> bool:
        return self.modulus != 0 and _is_prime(self.modulus)

    def normalize(self, x: int) -> int:
        return x if self.modulus == 0 else x % self.modulus

    def __str__(self):
        return "Z" if self.modulus == 0 else f"Z/{self.modulus}"


INTEGERS = CoefficientRing(0)


def mod_ring(m: int) -> CoefficientRing:
    return CoefficientRing(m)
