"""
Real quadratic fields Q(sqrt m).

The integral basis is {1, w} with w = sqrt(m) when m = 2, 3 (mod 4) and
w = (1 + sqrt(m)) / 2 when m = 1 (mod 4). With t = w + w' and n = w * w'
the minimal polynomial of w is x^2 - t x + n, so that

    w^2 = t w - n    and    Norm(a + b w) = a^2 + t a b + n b^2.

The fundamental unit comes from the continued fraction of w; the class
number from the cycles of reduced indefinite forms of discriminant disc(K).
"""

import logging
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterator, List, Optional, Tuple

from sympy.ntheory import factorint, is_quad_residue, sqrt_mod

from . import numfield
from .exceptions import FieldError, IdealError
from .numfield import AlgebraicInteger, IntegralIdeal, NumberField

logger = logging.getLogger(__name__)

# Continued fraction periods of fields we care about are far shorter.
MAX_CF_STEPS = 100_000


def minimal_polynomial_data(m: int) -> Tuple[int, int]:
    """
    Trace t and norm n of w, so that w^2 - t w + n = 0.
    """
    if m % 4 == 1:
        return 1, (1 - m) // 4
    return 0, -m


def field_discriminant(m: int) -> int:
    return m if m % 4 == 1 else 4 * m


def _check_squarefree(m: int) -> None:
    if m <= 1:
        raise FieldError("m must be greater than 1", {"m": m})
    if any(exponent > 1 for exponent in factorint(m).values()):
        raise FieldError("m is not squarefree", {"m": m})


def continued_fraction_convergents(m: int) -> Iterator[Tuple[int, int]]:
    """
    Convergents p/q of the continued fraction of w, exactly.

    w is written (P + sqrt m) / Q with Q | m - P^2; complete quotients stay
    in that shape and their partial quotients are computed with isqrt.
    """
    root = isqrt(m)
    P, Q = (1, 2) if m % 4 == 1 else (0, 1)
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    for _ in range(MAX_CF_STEPS):
        a = (P + root) // Q
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield p, q
        P = a * Q - P
        Q = (m - P * P) // Q
    raise FieldError("continued fraction did not produce a unit", {"m": m})


def fundamental_unit(m: int) -> Tuple[int, int]:
    """
    Fundamental unit eps > 1 of Q(sqrt m) as coordinates (a, b) over {1, w}.

    The first convergent p/q of w with Norm(p - q w) = +-1 gives
    eps = p - q w' = (p - q t) + q w.
    """
    t, n = minimal_polynomial_data(m)
    for p, q in continued_fraction_convergents(m):
        if abs(p * p - t * p * q + n * q * q) == 1:
            unit = (p - q * t, q)
            logger.debug(f"Fundamental unit of Q(sqrt {m}): {unit}")
            return unit
    raise FieldError("no unit found", {"m": m})


# ---------------------------------------------------------------------------
# Reduced indefinite forms
# ---------------------------------------------------------------------------


def _is_reduced(a: int, b: int, root: int) -> bool:
    # |sqrt D - 2|a|| < b < sqrt D for non-square D with isqrt(D) = root
    return 0 < b <= root and 2 * abs(a) + b > root and 2 * abs(a) - b <= root


def reduced_forms(D: int) -> List[Tuple[int, int, int]]:
    """
    All reduced forms (a, b, c) of non-square discriminant D > 0.
    """
    root = isqrt(D)
    forms = []
    for b in range(1, root + 1):
        if (b - D) % 2:
            continue
        product = (b * b - D) // 4
        magnitude = -product
        for a_abs in range(1, root + 1):
            if magnitude % a_abs:
                continue
            for a in (a_abs, -a_abs):
                c = product // a
                if _is_reduced(a, b, root):
                    forms.append((a, b, c))
    return sorted(set(forms))


def rho(form: Tuple[int, int, int], D: int) -> Tuple[int, int, int]:
    """
    Reduction operator: (a, b, c) -> (c, r, (r^2 - D) / 4c), properly equivalent.

    r is the representative of -b mod 2|c| in (sqrt D - 2|c|, sqrt D).
    """
    _, b, c = form
    root = isqrt(D)
    modulus = 2 * abs(c)
    r = root - ((root + b) % modulus)
    return (c, r, (r * r - D) // (4 * c))


def _form_cycles(D: int) -> List[List[Tuple[int, int, int]]]:
    remaining = set(reduced_forms(D))
    cycles = []
    for start in sorted(remaining):
        if start not in remaining:
            continue
        cycle = [start]
        remaining.discard(start)
        current = rho(start, D)
        while current != start:
            if current not in remaining:
                raise FieldError("reduction operator left the reduced forms", {"form": current})
            cycle.append(current)
            remaining.discard(current)
            current = rho(current, D)
        cycles.append(cycle)
    return cycles


@lru_cache(maxsize=None)
def class_numbers(m: int) -> Tuple[int, int]:
    """
    ``(h, h_plus)``: class number and narrow class number of Q(sqrt m).

    Each narrow class holds exactly one cycle of reduced forms; a wide class
    merges the cycle of (a, b, c) with the cycle of (-a, b, -c).
    """
    D = field_discriminant(m)
    cycles = _form_cycles(D)
    owner = {}
    for index, cycle in enumerate(cycles):
        for form in cycle:
            owner[form] = index
    merged = set()
    for index, cycle in enumerate(cycles):
        a, b, c = cycle[0]
        merged.add(min(index, owner[(-a, b, -c)]))
    return len(merged), len(cycles)


def fundamental_unit_norm(m: int) -> int:
    """Norm of the fundamental unit of Q(sqrt m), +1 or -1."""
    t, n = minimal_polynomial_data(m)
    a, b = fundamental_unit(m)
    return a * a + t * a * b + n * b * b


def check_narrow_relation(h: int, h_plus: int, unit_norm: int) -> None:
    """
    Raises:
        FieldError: Unless h+ = h when the unit norm is -1 and h+ = 2h when it is +1
    """
    expected = h * (2 if unit_norm == 1 else 1)
    if h_plus != expected:
        raise FieldError(
            "narrow class number disagrees with the fundamental unit norm",
            {"h": h, "h_plus": h_plus, "unit_norm": unit_norm},
        )


def narrow_class_number(K: NumberField) -> int:
    """
    Narrow class number of a real quadratic field, one per cycle of reduced forms.

    Raises:
        FieldError: If K is not a real quadratic field
    """
    if K.quadratic_m is None:
        raise FieldError("narrow class number needs a real quadratic field", {"label": K.label})
    return class_numbers(K.quadratic_m)[1]


# ---------------------------------------------------------------------------
# Field construction
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def make_quadratic_field(m: int) -> NumberField:
    """
    Build Q(sqrt m) with integral basis {1, w}.

    Args:
        m: Squarefree integer greater than 1

    Returns:
        NumberField with fundamental unit, class number and automorphisms

    Raises:
        FieldError: If m is not squarefree or m <= 1, or h and h+ disagree with the unit norm
    """
    _check_squarefree(m)
    t, n = minimal_polynomial_data(m)
    half = Fraction(1, 2)
    if m % 4 == 1:
        basis = ((Fraction(1), Fraction(0)), (half, half))
        sigma = ((1, 0), (1, -1))
    else:
        basis = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
        sigma = ((1, 0), (0, -1))
    mult_table = (
        ((1, 0), (0, 1)),
        ((0, 1), (-n, t)),
    )
    h, h_plus = class_numbers(m)
    unit_norm = fundamental_unit_norm(m)
    check_narrow_relation(h, h_plus, unit_norm)
    disc = field_discriminant(m)
    K = NumberField(
        degree=2,
        poly=(1, 0, -m),
        integral_basis=basis,
        mult_table=mult_table,
        disc=disc,
        automorphisms=(((1, 0), (0, 1)), sigma),
        units=(fundamental_unit(m),),
        class_number=h,
        label=f"2.2.{disc}.1",
        quadratic_m=m,
        narrow_class_number=h_plus,
    )
    logger.info(f"Built Q(sqrt {m}): disc={disc}, unit={K.units[0]}, h={h}, h+={h_plus}, N(unit)={unit_norm}")
    return K


def kronecker(D: int, q: int) -> int:
    """Kronecker symbol (D | q) for a rational prime q."""
    if D % q == 0:
        return 0
    if q == 2:
        return 1 if D % 8 in (1, 7) else -1
    return 1 if is_quad_residue(D % q, q) else -1


def _roots_mod(t: int, n: int, q: int) -> List[int]:
    if q == 2:
        return [r for r in range(2) if (r * r - t * r + n) % 2 == 0]
    disc = (t * t - 4 * n) % q
    inverse_two = pow(2, -1, q)
    if disc == 0:
        return [(t * inverse_two) % q]
    roots = sqrt_mod(disc, q, all_roots=True) or []
    return sorted({((t + s) * inverse_two) % q for s in roots})


def factor_quadratic_prime(K: NumberField, q: int) -> Tuple[IntegralIdeal, ...]:
    """
    Primes above q, split type read off the Kronecker symbol of disc(K).

    Primes above a split q are indexed by the increasing residue of w.
    """
    from sympy.ntheory import isprime

    if not isprime(q):
        raise IdealError("not a rational prime", {"q": q})
    t, n = minimal_polynomial_data(K.quadratic_m)
    symbol = kronecker(K.disc, q)
    if symbol == -1:
        hnf = numfield.ideal_from_generators(K, [numfield.from_int(K, q)]).hnf
        return (IntegralIdeal(hnf, residue_char=q, e=1, f=2, index=0),)
    roots = _roots_mod(t, n, q)
    e = 2 if symbol == 0 else 1
    primes = []
    for index, r in enumerate(roots):
        gens = [numfield.from_int(K, q), AlgebraicInteger((-r, 1))]
        hnf = numfield.ideal_from_generators(K, gens).hnf
        primes.append(IntegralIdeal(hnf, residue_char=q, e=e, f=1, index=index))
    if sum(p.e * p.f for p in primes) != 2:
        raise IdealError("inconsistent splitting", {"q": q, "roots": roots})
    return tuple(primes)


def residue_of_w(K: NumberField, prime: IntegralIdeal) -> Optional[int]:
    """Image of w in the residue field of a degree-one prime."""
    if prime.f != 1:
        return None
    t, n = minimal_polynomial_data(K.quadratic_m)
    return _roots_mod(t, n, prime.residue_char)[prime.index]


# ---------------------------------------------------------------------------
# Principal ideals and squares
# ---------------------------------------------------------------------------


def _unit_upper_bound(K: NumberField) -> int:
    a, b = K.units[0]
    t, _ = minimal_polynomial_data(K.quadratic_m)
    w_upper = (isqrt(K.quadratic_m) + 1 + t) // (1 + t) + 1
    return abs(a) + abs(b) * w_upper + 1


def principal_generator(K: NumberField, ideal: IntegralIdeal) -> Optional[AlgebraicInteger]:
    """
    A generator of ``ideal`` if it is principal, else None.

    Some generator alpha satisfies sqrt(N) <= alpha < eps sqrt(N) after
    multiplying by units, which bounds |b| in alpha = a + b w by
    (eps + 1) sqrt(N) / sqrt(m); every b in that box is tried.
    """
    m = K.quadratic_m
    if m is None:
        raise FieldError("principal generator search needs a real quadratic field")
    norm = ideal.norm
    if norm == 1:
        return numfield.one(K)
    t, n = minimal_polynomial_data(m)
    bound = (isqrt(norm) + 1) * (_unit_upper_bound(K) + 1) // max(1, isqrt(m)) + 1
    for b_abs in range(0, bound + 1):
        for b in sorted({b_abs, -b_abs}):
            for target in (norm, -norm):
                # a^2 + t b a + (n b^2 - target) = 0
                disc = t * t * b * b - 4 * (n * b * b - target)
                if disc < 0:
                    continue
                root = isqrt(disc)
                if root * root != disc:
                    continue
                for numerator in sorted({-t * b + root, -t * b - root}):
                    if numerator % 2:
                        continue
                    candidate = AlgebraicInteger((numerator // 2, b))
                    if numfield.ideal_contains(ideal, candidate):
                        return candidate
    return None


def ideal_class_order(K: NumberField, ideal: IntegralIdeal) -> Tuple[int, AlgebraicInteger]:
    """
    Smallest k dividing h with ``ideal ** k`` principal, with a generator.
    """
    h = K.class_number
    for k in sorted(d for d in range(1, h + 1) if h % d == 0):
        power = numfield.ideal_power(K, ideal, k)
        generator = principal_generator(K, power)
        if generator is not None:
            return k, generator
    raise IdealError("ideal power did not become principal", {"hnf": ideal.hnf, "h": h})


def is_square(K: NumberField, delta: AlgebraicInteger) -> bool:
    """
    Whether ``delta`` is a square in the real quadratic field.

    A square root gamma has Norm(gamma) = +-sqrt(Norm delta) and trace T with
    T^2 = Tr(delta) + 2 Norm(gamma); then gamma = (delta + Norm(gamma)) / T.
    """
    if delta.is_zero():
        return True
    norm = numfield.element_norm(K, delta)
    if norm < 0:
        return False
    s = isqrt(norm)
    if s * s != norm:
        return False
    trace = numfield.element_trace(K, delta)
    for gamma_norm in (s, -s):
        square_trace = trace + 2 * gamma_norm
        if square_trace < 0:
            continue
        T = isqrt(square_trace)
        if T * T != square_trace:
            continue
        if T == 0:
            continue
        for signed_T in (T, -T):
            shifted = delta + numfield.from_int(K, gamma_norm)
            if any(c % signed_T for c in shifted.coords):
                continue
            gamma = AlgebraicInteger(tuple(c // signed_T for c in shifted.coords))
            if numfield.mul(K, gamma, gamma) == delta:
                return True
    if delta.is_rational():
        # gamma = k sqrt(m) has trace zero
        a = delta.coords[0]
        m = K.quadratic_m
        if a > 0 and a % m == 0:
            k = isqrt(a // m)
            return k * k == a // m
    return False
