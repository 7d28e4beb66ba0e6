"""
Exact arithmetic in a totally real Galois number field.

Elements are integer coordinate vectors over a fixed integral basis whose
first vector is 1. Ideals are full-rank sublattices of the ring of integers
kept in canonical row Hermite normal form (see ``lattice``). Every value is
immutable, so fields, elements and ideals can be shared between workers.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy import Matrix as SympyMatrix

from . import intervals, lattice
from .exceptions import FieldError, IdealError

logger = logging.getLogger(__name__)

IntMatrix = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class AlgebraicInteger:
    """
    Element of the ring of integers, as coordinates over the integral basis.
    """

    coords: Tuple[int, ...]

    def __add__(self, other: "AlgebraicInteger") -> "AlgebraicInteger":
        return AlgebraicInteger(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "AlgebraicInteger") -> "AlgebraicInteger":
        return AlgebraicInteger(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "AlgebraicInteger":
        return AlgebraicInteger(tuple(-a for a in self.coords))

    def scale(self, factor: int) -> "AlgebraicInteger":
        return AlgebraicInteger(tuple(factor * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True, eq=False)
class IntegralIdeal:
    """
    Integral ideal given by its canonical row HNF over the integral basis.

    Prime ideals additionally record residue characteristic, ramification
    index, residue degree and their position among the primes above the
    residue characteristic.
    """

    hnf: IntMatrix
    residue_char: Optional[int] = None
    e: Optional[int] = None
    f: Optional[int] = None
    index: Optional[int] = None

    def __eq__(self, other) -> bool:
        return isinstance(other, IntegralIdeal) and self.hnf == other.hnf

    def __hash__(self) -> int:
        return hash(self.hnf)

    @property
    def norm(self) -> int:
        return lattice.determinant(self.hnf)

    @property
    def is_prime(self) -> bool:
        return self.residue_char is not None

    @property
    def key(self) -> str:
        """Stable join key ``<residue_char>.<norm>.<index>`` of a prime ideal."""
        if not self.is_prime:
            raise IdealError("only prime ideals carry a key", {"hnf": self.hnf})
        return f"{self.residue_char}.{self.norm}.{self.index}"

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        return (self.norm, self.residue_char or 0, self.index or 0)

    def is_unit(self) -> bool:
        return self.norm == 1


def parse_prime_key(key: str) -> Tuple[int, int, int]:
    """
    Split a prime key into ``(residue_char, norm, index)``.

    Raises:
        IdealError: If the key is malformed
    """
    parts = key.split(".")
    if len(parts) != 3 or not all(part.isdigit() for part in parts):
        raise IdealError("malformed prime key", {"key": key})
    q, norm, index = (int(part) for part in parts)
    if q < 2 or norm < q:
        raise IdealError("malformed prime key", {"key": key})
    return q, norm, index


def prime_key_order(key: str) -> Tuple[int, int, int]:
    """Ordering by norm, then residue characteristic, then index."""
    q, norm, index = parse_prime_key(key)
    return (norm, q, index)


@dataclass(frozen=True)
class NumberField:
    """
    Totally real Galois number field with explicit integral data.

    Attributes:
        degree: Degree d over the rationals
        poly: Defining polynomial, integer coefficients, leading 1 first
        integral_basis: Rows express each basis vector in ascending powers of a root
        mult_table: ``mult_table[i][j]`` is the coordinate vector of ``b_i * b_j``
        disc: Field discriminant
        automorphisms: Matrices whose row j holds the coordinates of ``tau(b_j)``
        units: Coordinates of the unit basis eps_1 .. eps_{d-1}
        class_number: Class number h
        label: Field label used by datasets
        quadratic_m: Squarefree m when the field is the standard model of Q(sqrt m)
        narrow_class_number: Narrow class number when computed
        primes: Config-supplied prime ideals (general fields)
        s_unit_generators: Config-supplied ``(prime key, generator)`` pairs
    """

    degree: int
    poly: Tuple[int, ...]
    integral_basis: Tuple[Tuple[Fraction, ...], ...]
    mult_table: Tuple[IntMatrix, ...]
    disc: int
    automorphisms: Tuple[IntMatrix, ...]
    units: Tuple[Tuple[int, ...], ...]
    class_number: int
    label: str
    quadratic_m: Optional[int] = None
    narrow_class_number: Optional[int] = None
    primes: Tuple[IntegralIdeal, ...] = field(default=())
    s_unit_generators: Tuple[Tuple[str, Tuple[int, ...]], ...] = field(default=())

    @property
    def unit_elements(self) -> List[AlgebraicInteger]:
        return [AlgebraicInteger(u) for u in self.units]


def make_quadratic_field(m: int) -> NumberField:
    """
    Real quadratic field Q(sqrt m) with fundamental unit and class number.

    See ``quadratic.make_quadratic_field``.
    """
    from .quadratic import make_quadratic_field as build

    return build(m)


def make_field_from_config(cfg: dict) -> NumberField:
    """
    Build and validate a field from a field-description document.

    See ``field_config.make_field_from_config``.
    """
    from .field_config import make_field_from_config as build

    return build(cfg)


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


def one(K: NumberField) -> AlgebraicInteger:
    return from_int(K, 1)


def from_int(K: NumberField, n: int) -> AlgebraicInteger:
    return AlgebraicInteger((n,) + (0,) * (K.degree - 1))


def element(K: NumberField, coords: Sequence[int]) -> AlgebraicInteger:
    """
    Wrap a coordinate vector, checking its length.
    """
    coords = tuple(int(c) for c in coords)
    if len(coords) != K.degree:
        raise FieldError("coordinate vector has wrong length", {"expected": K.degree, "got": len(coords)})
    return AlgebraicInteger(coords)


def basis_element(K: NumberField, j: int) -> AlgebraicInteger:
    return AlgebraicInteger(tuple(1 if i == j else 0 for i in range(K.degree)))


def mul(K: NumberField, alpha: AlgebraicInteger, beta: AlgebraicInteger) -> AlgebraicInteger:
    """
    Product of two elements via the structure constants.
    """
    d = K.degree
    result = [0] * d
    table = K.mult_table
    for i, a in enumerate(alpha.coords):
        if not a:
            continue
        for j, b in enumerate(beta.coords):
            if not b:
                continue
            ab = a * b
            row = table[i][j]
            for k in range(d):
                if row[k]:
                    result[k] += ab * row[k]
    return AlgebraicInteger(tuple(result))


def power(K: NumberField, alpha: AlgebraicInteger, exponent: int) -> AlgebraicInteger:
    """Non-negative power by repeated squaring."""
    if exponent < 0:
        raise FieldError("negative exponent", {"exponent": exponent})
    result = one(K)
    base = alpha
    while exponent:
        if exponent & 1:
            result = mul(K, result, base)
        exponent >>= 1
        if exponent:
            base = mul(K, base, base)
    return result


def multiplication_matrix(K: NumberField, alpha: AlgebraicInteger) -> IntMatrix:
    """Rows are the coordinates of ``alpha * b_i``."""
    return tuple(mul(K, alpha, basis_element(K, i)).coords for i in range(K.degree))


def element_norm(K: NumberField, alpha: AlgebraicInteger) -> int:
    """
    Field norm of ``alpha``: determinant of multiplication by ``alpha``.
    """
    if K.degree == 1:
        return alpha.coords[0]
    if K.degree == 2:
        (a, b), (c, d) = multiplication_matrix(K, alpha)
        return a * d - b * c
    return int(SympyMatrix(multiplication_matrix(K, alpha)).det())


def element_trace(K: NumberField, alpha: AlgebraicInteger) -> int:
    matrix = multiplication_matrix(K, alpha)
    return sum(matrix[i][i] for i in range(K.degree))


def apply_automorphism(K: NumberField, tau: int, alpha: AlgebraicInteger) -> AlgebraicInteger:
    """
    Image of ``alpha`` under the automorphism with index ``tau``.
    """
    matrix = K.automorphisms[tau]
    d = K.degree
    return AlgebraicInteger(tuple(sum(alpha.coords[j] * matrix[j][k] for j in range(d)) for k in range(d)))


def power_basis_coefficients(K: NumberField, alpha: AlgebraicInteger) -> Tuple[Fraction, ...]:
    """Coefficients of ``alpha`` in ascending powers of the defining root."""
    d = K.degree
    return tuple(
        sum((Fraction(alpha.coords[j]) * K.integral_basis[j][k] for j in range(d)), Fraction(0))
        for k in range(d)
    )


def real_embedding_intervals(
    K: NumberField, alpha: AlgebraicInteger, eps: Fraction = Fraction(1, 2 ** 30)
) -> List[intervals.RationalInterval]:
    """
    Certified enclosures of ``alpha`` under each real embedding.

    Embeddings are ordered by the increasing real roots of the defining
    polynomial.
    """
    coefficients = power_basis_coefficients(K, alpha)
    return [intervals.evaluate(coefficients, root) for root in intervals.root_intervals(K.poly, eps)]


# ---------------------------------------------------------------------------
# Ideals
# ---------------------------------------------------------------------------


def unit_ideal(K: NumberField) -> IntegralIdeal:
    return IntegralIdeal(tuple(tuple(1 if i == j else 0 for j in range(K.degree)) for i in range(K.degree)))


def ideal_from_generators(K: NumberField, gens: Iterable[AlgebraicInteger]) -> IntegralIdeal:
    """
    Ideal generated by the given elements (their gcd), in canonical HNF.

    Zero generators are skipped.

    Raises:
        IdealError: If every generator is zero
    """
    rows = []
    for gen in gens:
        if gen.is_zero():
            continue
        rows.extend(multiplication_matrix(K, gen))
    if not rows:
        raise IdealError("zero ideal: every generator is zero")
    return IntegralIdeal(lattice.row_hnf(rows, K.degree))


def ideal_norm(ideal: IntegralIdeal) -> int:
    """Absolute norm, the determinant of the HNF."""
    return ideal.norm


def ideal_elements(K: NumberField, ideal: IntegralIdeal) -> List[AlgebraicInteger]:
    return [AlgebraicInteger(row) for row in ideal.hnf]


def ideal_mul(K: NumberField, first: IntegralIdeal, second: IntegralIdeal) -> IntegralIdeal:
    """Product of two ideals."""
    rows = [
        mul(K, AlgebraicInteger(a), AlgebraicInteger(b)).coords
        for a in first.hnf
        for b in second.hnf
    ]
    return IntegralIdeal(lattice.row_hnf(rows, K.degree))


def ideal_power(K: NumberField, ideal: IntegralIdeal, exponent: int) -> IntegralIdeal:
    """Non-negative power of an ideal by repeated squaring."""
    result = unit_ideal(K)
    base = ideal
    while exponent > 0:
        if exponent & 1:
            result = ideal_mul(K, result, base)
        exponent >>= 1
        if exponent:
            base = ideal_mul(K, base, base)
    return result


def ideal_sum(first: IntegralIdeal, second: IntegralIdeal) -> IntegralIdeal:
    """gcd of two ideals (sum of lattices)."""
    return IntegralIdeal(lattice.lattice_sum(first.hnf, second.hnf))


def ideal_contains(ideal: IntegralIdeal, alpha: AlgebraicInteger) -> bool:
    return lattice.contains(ideal.hnf, alpha.coords)


def ideal_divides(divisor: IntegralIdeal, ideal: IntegralIdeal) -> bool:
    """``divisor | ideal`` for integral ideals, i.e. ``ideal`` is contained in ``divisor``."""
    return all(lattice.contains(divisor.hnf, row) for row in ideal.hnf)


def is_ideal(K: NumberField, hnf: IntMatrix) -> bool:
    """Whether the lattice is closed under multiplication by every basis element."""
    for row in hnf:
        for j in range(K.degree):
            if not lattice.contains(hnf, mul(K, AlgebraicInteger(row), basis_element(K, j)).coords):
                return False
    return True


def reduce_mod_ideal(ideal: IntegralIdeal, alpha: AlgebraicInteger) -> AlgebraicInteger:
    """Canonical residue of ``alpha`` modulo ``ideal``."""
    return AlgebraicInteger(lattice.reduce_vector(ideal.hnf, alpha.coords))


def power_mod_ideal(K: NumberField, alpha: AlgebraicInteger, exponent: int, ideal: IntegralIdeal) -> AlgebraicInteger:
    """``alpha ** exponent`` reduced modulo ``ideal`` at every step."""
    result = reduce_mod_ideal(ideal, one(K))
    base = reduce_mod_ideal(ideal, alpha)
    while exponent:
        if exponent & 1:
            result = reduce_mod_ideal(ideal, mul(K, result, base))
        exponent >>= 1
        if exponent:
            base = reduce_mod_ideal(ideal, mul(K, base, base))
    return result


def valuation(K: NumberField, prime: IntegralIdeal, alpha: AlgebraicInteger) -> int:
    """
    Exponent of ``prime`` in the principal ideal ``(alpha)``.
    """
    if alpha.is_zero():
        raise IdealError("valuation of zero is undefined")
    bound = abs(element_norm(K, alpha))
    count = 0
    current = prime
    while bound % prime.norm == 0 and ideal_contains(current, alpha):
        count += 1
        bound //= prime.norm
        current = ideal_mul(K, current, prime)
    return count


def residue_ring_is_field(K: NumberField, ideal: IntegralIdeal, limit: int = 100_000) -> Optional[bool]:
    """
    Whether ``O_K / ideal`` is a field.

    Uses Fermat's little theorem on every nonzero residue; returns None when
    the residue ring is larger than ``limit``.
    """
    size = ideal.norm
    if size < 2:
        return False
    if size > limit:
        return None
    pivots = [ideal.hnf[i][i] for i in range(K.degree)]
    residues = [()]
    for pivot in pivots:
        residues = [r + (c,) for r in residues for c in range(pivot)]
    unit = reduce_mod_ideal(ideal, one(K))
    for coords in residues:
        alpha = AlgebraicInteger(coords)
        if alpha.is_zero():
            continue
        if power_mod_ideal(K, alpha, size - 1, ideal) != unit:
            return False
    return True


@lru_cache(maxsize=None)
def factor_rational_prime(K: NumberField, q: int) -> Tuple[IntegralIdeal, ...]:
    """
    Prime ideals above the rational prime ``q`` with their (e, f).

    Real quadratic fields are factored directly; general fields return the
    config-supplied primes above ``q``.
    """
    if K.quadratic_m is not None:
        from .quadratic import factor_quadratic_prime

        return factor_quadratic_prime(K, q)
    found = tuple(sorted((p for p in K.primes if p.residue_char == q), key=lambda p: p.sort_key))
    if sum(p.e * p.f for p in found) != K.degree:
        logger.debug(f"Config supplies an incomplete factorization of {q}")
    return found


def prime_by_key(K: NumberField, key: str) -> Optional[IntegralIdeal]:
    """
    Look up a prime ideal by its key, or None when the field does not know it.
    """
    q, norm, index = parse_prime_key(key)
    for prime in factor_rational_prime(K, q):
        if prime.norm == norm and prime.index == index:
            return prime
    return None


def ramified_primes(K: NumberField) -> List[int]:
    """Rational primes dividing the discriminant."""
    from sympy.ntheory import primefactors

    return [int(q) for q in primefactors(abs(K.disc))]
