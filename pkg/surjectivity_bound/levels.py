"""
Additive level and quadratic-character conductor bound attached to S.
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

from . import numfield
from .exceptions import IdealError
from .numfield import IntegralIdeal, NumberField

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LevelData:
    M: IntegralIdeal
    M_norm: int
    character_bound: IntegralIdeal
    character_bound_norm: int
    exponents: Tuple[Tuple[str, int, int], ...] = ()


def ord_rational_prime(prime: IntegralIdeal, n: int) -> int:
    """
    Valuation at ``prime`` of the rational prime ``n``: e when prime lies over n, else 0.
    """
    if not prime.is_prime or prime.e is None:
        raise IdealError("prime ideal with known ramification index required", {"hnf": prime.hnf})
    return prime.e if prime.residue_char == n else 0


def level_exponent(prime: IntegralIdeal) -> int:
    """2 + 6 ord(2) + 3 ord(3)."""
    return 2 + 6 * ord_rational_prime(prime, 2) + 3 * ord_rational_prime(prime, 3)


def character_exponent(prime: IntegralIdeal) -> int:
    """1 + 2 ord(2)."""
    return 1 + 2 * ord_rational_prime(prime, 2)


def _power_product(K: NumberField, S: Sequence[IntegralIdeal], exponent_of) -> IntegralIdeal:
    result = numfield.unit_ideal(K)
    for prime in S:
        result = numfield.ideal_mul(K, result, numfield.ideal_power(K, prime, exponent_of(prime)))
    return result


def additive_level(K: NumberField, S: Sequence[IntegralIdeal]) -> IntegralIdeal:
    """
    Product of prime ** (2 + 6 ord(2) + 3 ord(3)) over S.
    """
    return _power_product(K, S, level_exponent)


def character_conductor_bound(K: NumberField, S: Sequence[IntegralIdeal]) -> IntegralIdeal:
    """
    Product of prime ** (1 + 2 ord(2)) over S.
    """
    return _power_product(K, S, character_exponent)


def compute_levels(K: NumberField, S: Sequence[IntegralIdeal]) -> LevelData:
    """
    Both level ideals with their norms and the per-prime exponents.

    Raises:
        IdealError: If S contains a prime twice
    """
    keys = [prime.key for prime in S]
    if len(set(keys)) != len(keys):
        raise IdealError("S contains a duplicate prime", {"S": keys})
    M = additive_level(K, S)
    bound = character_conductor_bound(K, S)
    exponents = tuple((prime.key, level_exponent(prime), character_exponent(prime)) for prime in S)
    logger.info(f"Additive level norm {M.norm}, character conductor bound norm {bound.norm}")
    return LevelData(
        M=M,
        M_norm=M.norm,
        character_bound=bound,
        character_bound_norm=bound.norm,
        exponents=exponents,
    )
