"""
Twisted norms, the pattern constants A_s and the irreducibility threshold.

For a sign pattern s in {0, 12}^G the twisted norm of alpha is the product
of tau(alpha) ** s_tau over the automorphisms. A_s is the norm of the ideal
generated by the twisted norms of the units minus one, B is the lcm of the
A_s over the non-constant patterns, and every prime above the returned
threshold yields an irreducible mod-p representation.
"""

import logging
from dataclasses import dataclass
from itertools import product
from math import lcm
from typing import List, Optional, Sequence, Tuple

from sympy.ntheory import primefactors, primerange

from . import numfield
from .exceptions import IrreducibilityError
from .numfield import AlgebraicInteger, IntegralIdeal, NumberField
from .worker_pool import WorkerPool

logger = logging.getLogger(__name__)

PATTERN_EXPONENTS = (0, 12)

# Every prime above this satisfies "p >= 17 or p = 11".
SMALL_PRIME_FLOOR = 13


@dataclass(frozen=True, order=True)
class SignPattern:
    """
    Exponents ``s_tau`` in {0, 12}, indexed like ``K.automorphisms``.
    """

    values: Tuple[int, ...]

    def __post_init__(self):
        if any(v not in PATTERN_EXPONENTS for v in self.values):
            raise IrreducibilityError("pattern exponents must be 0 or 12", {"values": self.values})

    @property
    def trivial(self) -> bool:
        return len(set(self.values)) <= 1

    def complement(self) -> "SignPattern":
        return SignPattern(tuple(12 - v for v in self.values))

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.values) + ")"


@dataclass(frozen=True)
class IrreducibilityBound:
    """
    B with its pattern table, the 1 + 3^(6dh) bound and the final threshold.
    """

    B: int
    pattern_table: Tuple[Tuple[SignPattern, int], ...]
    merel_momose: int
    excluded_primes: Tuple[int, ...]
    threshold: int


def sign_patterns(d: int) -> List[SignPattern]:
    """Non-trivial patterns in lexicographic order."""
    patterns = [SignPattern(values) for values in product(PATTERN_EXPONENTS, repeat=d)]
    return [p for p in patterns if not p.trivial]


def twisted_norm(K: NumberField, s: SignPattern, alpha: AlgebraicInteger) -> AlgebraicInteger:
    """
    Product over the automorphisms of ``tau(alpha) ** s_tau``.
    """
    if len(s.values) != K.degree:
        raise IrreducibilityError("pattern length must equal the degree", {"length": len(s.values)})
    result = numfield.one(K)
    for tau, exponent in enumerate(s.values):
        if exponent:
            conjugate = numfield.apply_automorphism(K, tau, alpha)
            result = numfield.mul(K, result, numfield.power(K, conjugate, exponent))
    return result


def pattern_ideal(K: NumberField, s: SignPattern) -> IntegralIdeal:
    """
    gcd of the ideals generated by twisted_norm(s, eps_i) - 1.

    Raises:
        IrreducibilityError: If the pattern is trivial or every generator is zero
    """
    if s.trivial:
        raise IrreducibilityError("pattern constant is undefined for constant patterns", {"pattern": str(s)})
    one = numfield.one(K)
    gens = [twisted_norm(K, s, unit) - one for unit in K.unit_elements]
    if all(g.is_zero() for g in gens):
        raise IrreducibilityError("every twisted norm minus one vanishes, B would be zero", {"pattern": str(s)})
    return numfield.ideal_from_generators(K, gens)


def pattern_constant(K: NumberField, s: SignPattern) -> int:
    """
    A_s, the norm of ``pattern_ideal(K, s)``.
    """
    constant = pattern_ideal(K, s).norm
    logger.debug(f"A_{s} = {constant}")
    return constant


def bound_B(K: NumberField, pool: Optional[WorkerPool] = None) -> Tuple[int, Tuple[Tuple[SignPattern, int], ...]]:
    """
    lcm of A_s over every non-constant pattern.

    Args:
        K: Galois field of degree at least 2
        pool: Optional worker pool for the per-pattern constants

    Returns:
        ``(B, table)`` with the table in lexicographic pattern order

    Raises:
        IrreducibilityError: If the pattern set is empty (degree 1)
    """
    patterns = sign_patterns(K.degree)
    if not patterns:
        raise IrreducibilityError("pattern set empty: B is undefined for degree 1", {"degree": K.degree})
    if pool is None:
        constants = [pattern_constant(K, s) for s in patterns]
    else:
        constants = pool.map_ordered(lambda s: pattern_constant(K, s), patterns)
    table = tuple(zip(patterns, constants))
    B = 1
    for _, constant in table:
        B = lcm(B, constant)
    logger.info(f"B = {B} over {len(table)} pattern(s)")
    return B, table


def merel_momose_bound(d: int, h: int) -> int:
    """1 + 3^(6dh), exactly."""
    if d < 1 or h < 1:
        raise IrreducibilityError("degree and class number must be positive", {"d": d, "h": h})
    return 1 + 3 ** (6 * d * h)


def excluded_primes(K: NumberField, B: int, S: Sequence[IntegralIdeal]) -> Tuple[int, ...]:
    """
    Primes dividing B or disc(K), primes at most 13 other than 11, and residue characteristics of S.
    """
    excluded = set(int(q) for q in primefactors(B))
    excluded.update(numfield.ramified_primes(K))
    excluded.update(int(q) for q in primerange(2, SMALL_PRIME_FLOOR + 1) if q != 11)
    excluded.update(prime.residue_char for prime in S)
    return tuple(sorted(excluded))


def irreducibility_threshold(
    K: NumberField, S: Sequence[IntegralIdeal], pool: Optional[WorkerPool] = None
) -> IrreducibilityBound:
    """
    Threshold above which every prime satisfies the irreducibility hypotheses.

    Args:
        K: Galois field
        S: Prime ideals of S
        pool: Optional worker pool

    Returns:
        IrreducibilityBound
    """
    B, table = bound_B(K, pool)
    bound = merel_momose_bound(K.degree, K.class_number)
    excluded = excluded_primes(K, B, S)
    threshold = max([bound, SMALL_PRIME_FLOOR, *excluded])
    logger.info(f"Irreducibility threshold {threshold} (1 + 3^(6dh) = {bound})")
    return IrreducibilityBound(
        B=B,
        pattern_table=table,
        merel_momose=bound,
        excluded_primes=excluded,
        threshold=threshold,
    )
