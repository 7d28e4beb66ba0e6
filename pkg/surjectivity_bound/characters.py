"""
Quadratic characters of K given by square classes of S-units.

The candidate set is generated by -1, the unit basis and, for each prime l
of S, a generator pi_l of the principal ideal l^k (k the order of l in the
class group). A class delta gives the character of K(sqrt delta)/K, whose
value at an odd prime q not dividing delta is the Euler criterion
delta^((Nq - 1)/2) mod q.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.ntheory import primefactors

from . import numfield
from .exceptions import CharacterError
from .numfield import AlgebraicInteger, IntegralIdeal, NumberField

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadraticCharacter:
    """
    Character attached to the square class of ``delta``.

    Attributes:
        delta: Representative of the square class
        exponents: Exponent vector over the generator list
        label: Readable name such as ``-1*eps1*pi[11.11.0]``
        conductor_certificate: Product of the S primes where delta has odd valuation
    """

    delta: AlgebraicInteger
    exponents: Tuple[int, ...]
    label: str
    conductor_certificate: Optional[IntegralIdeal] = None


@dataclass(frozen=True)
class CharacterSet:
    characters: Tuple[QuadraticCharacter, ...]
    generators: Tuple[Tuple[str, AlgebraicInteger], ...]
    pruned: Tuple[Dict, ...] = field(default=())


def s_unit_generator(K: NumberField, prime: IntegralIdeal) -> Tuple[int, AlgebraicInteger]:
    """
    ``(k, pi)`` with pi generating prime ** k.

    Raises:
        CharacterError: If no generator is known (general fields need one in the config)
    """
    if K.quadratic_m is not None:
        from .quadratic import ideal_class_order

        return ideal_class_order(K, prime)
    for key, coords in K.s_unit_generators:
        if key == prime.key:
            pi = AlgebraicInteger(coords)
            return numfield.valuation(K, prime, pi), pi
    raise CharacterError("no generator known for a power of this prime", {"prime": prime.key})


def _generators(K: NumberField, S: Sequence[IntegralIdeal]) -> List[Tuple[str, AlgebraicInteger]]:
    gens = [("-1", numfield.from_int(K, -1))]
    for i, unit in enumerate(K.unit_elements, start=1):
        gens.append((f"eps{i}", unit))
    for prime in sorted(S, key=lambda p: p.sort_key):
        k, pi = s_unit_generator(K, prime)
        logger.debug(f"pi[{prime.key}] = {pi} generates the prime to the power {k}")
        gens.append((f"pi[{prime.key}]", pi))
    return gens


def _is_square(K: NumberField, delta: AlgebraicInteger) -> Optional[bool]:
    if K.quadratic_m is not None:
        from .quadratic import is_square

        return is_square(K, delta)
    return None


def _odd_support(K: NumberField, delta: AlgebraicInteger) -> List[Tuple[IntegralIdeal, int]]:
    """Primes of odd residue characteristic where delta has odd valuation."""
    support = []
    norm = abs(numfield.element_norm(K, delta))
    for q in primefactors(norm):
        if q == 2:
            continue
        for prime in numfield.factor_rational_prime(K, int(q)):
            v = numfield.valuation(K, prime, delta)
            if v % 2:
                support.append((prime, v))
    return support


def enumerate_characters(K: NumberField, S: Sequence[IntegralIdeal]) -> CharacterSet:
    """
    Nontrivial square classes of <-1, units, pi_l : l in S>.

    Classes that are squares are dropped, classes equal modulo squares are
    merged (both only decidable for real quadratic fields), and classes
    ramified at a prime outside S with odd residue characteristic are
    pruned with a witness.

    Returns:
        CharacterSet in exponent-vector order
    """
    gens = _generators(K, S)
    s_keys = {prime.key for prime in S}
    rank = len(gens)
    vectors = [v for v in product((0, 1), repeat=rank) if any(v)]

    def delta_of(vector: Tuple[int, ...]) -> AlgebraicInteger:
        delta = numfield.one(K)
        for bit, (_, g) in zip(vector, gens):
            if bit:
                delta = numfield.mul(K, delta, g)
        return delta

    squares = [tuple(0 for _ in range(rank))]
    for vector in vectors:
        if _is_square(K, delta_of(vector)):
            squares.append(vector)

    characters, pruned = [], []
    for vector in vectors:
        if vector in squares:
            continue
        coset = [tuple(a ^ b for a, b in zip(vector, w)) for w in squares]
        if min(coset) != vector:
            continue
        delta = delta_of(vector)
        label = "*".join(name for bit, (name, _) in zip(vector, gens) if bit)
        support = _odd_support(K, delta)
        outside = [(prime, v) for prime, v in support if prime.key not in s_keys]
        if outside:
            prime, v = outside[0]
            pruned.append({"character": label, "prime": prime.key, "valuation": v})
            logger.debug(f"Pruned character {label}: ramified at {prime.key}")
            continue
        certificate = numfield.unit_ideal(K)
        for prime, _ in support:
            certificate = numfield.ideal_mul(K, certificate, prime)
        characters.append(QuadraticCharacter(delta, vector, label, certificate))

    logger.info(f"{len(characters)} quadratic character(s) from {rank} generator(s), {len(pruned)} pruned")
    return CharacterSet(characters=tuple(characters), generators=tuple(gens), pruned=tuple(pruned))


def character_value(K: NumberField, psi: QuadraticCharacter, prime: IntegralIdeal) -> int:
    """
    psi at a prime ideal: +1, -1, or 0 when ramified or the residue characteristic is 2.

    Raises:
        CharacterError: If the Euler criterion gives neither 1 nor -1 (prime is not prime)
    """
    if prime.residue_char == 2:
        return 0
    if numfield.ideal_contains(prime, psi.delta):
        return 0
    value = numfield.power_mod_ideal(K, psi.delta, (prime.norm - 1) // 2, prime)
    if value == numfield.reduce_mod_ideal(prime, numfield.one(K)):
        return 1
    if value == numfield.reduce_mod_ideal(prime, numfield.from_int(K, -1)):
        return -1
    raise CharacterError("Euler criterion failed; ideal is not prime", {"prime": prime.key, "character": psi.label})
