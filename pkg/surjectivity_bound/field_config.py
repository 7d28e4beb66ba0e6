"""
Field-description documents: load, validate and serialize.

A document describes a totally real Galois field completely (integral
basis, structure constants, automorphisms, units, class number and the
prime ideals a run needs). Validation walks the invariants in a fixed
order and stops at the first failure, naming it in the error.
"""

import json
import logging
from dataclasses import replace
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple

from sympy import Poly

from . import intervals, lattice, numfield
from .exceptions import FieldError, IdealError
from .numfield import IntegralIdeal, NumberField

logger = logging.getLogger(__name__)

REQUIRED_KEYS = (
    "degree",
    "poly",
    "integral_basis",
    "mult_table",
    "disc",
    "automorphisms",
    "units",
    "class_number",
)

# Associativity is checked on every basis triple up to this degree.
ASSOCIATIVITY_CHECK_DEGREE = 4


def _int_matrix(value: Any, rows: int, cols: int, name: str) -> Tuple[Tuple[int, ...], ...]:
    if not isinstance(value, list) or len(value) != rows:
        raise FieldError(f"{name} must have {rows} rows", {"key": name})
    result = []
    for row in value:
        if not isinstance(row, list) or len(row) != cols:
            raise FieldError(f"{name} rows must have {cols} entries", {"key": name})
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in row):
            raise FieldError(f"{name} entries must be integers", {"key": name})
        result.append(tuple(row))
    return tuple(result)


def _fraction_entry(value: Any) -> Fraction:
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(x, int) for x in value) and value[1] != 0:
        return Fraction(value[0], value[1])
    raise FieldError("integral_basis entries must be integers or [num, den] pairs", {"entry": value})


def _poly_mul_mod(first: Sequence[Fraction], second: Sequence[Fraction], poly: Sequence[int]) -> List[Fraction]:
    """Product of two ascending coefficient lists modulo a monic polynomial (leading first)."""
    d = len(poly) - 1
    product_coeffs = [Fraction(0)] * (2 * d - 1)
    for i, a in enumerate(first):
        for j, b in enumerate(second):
            product_coeffs[i + j] += a * b
    # x^d = -(poly[1] x^{d-1} + ... + poly[d])
    ascending_tail = list(reversed(poly[1:]))
    for k in range(len(product_coeffs) - 1, d - 1, -1):
        top = product_coeffs[k]
        if top:
            product_coeffs[k] = Fraction(0)
            for i, c in enumerate(ascending_tail):
                product_coeffs[k - d + i] -= top * c
    return product_coeffs[:d]


def _check_polynomial(d: int, poly: Tuple[int, ...]) -> None:
    if len(poly) != d + 1 or poly[0] != 1:
        raise FieldError("defining polynomial must be monic of degree d", {"poly": list(poly)})
    if d > 1 and not Poly(list(poly), intervals.X).is_irreducible:
        raise FieldError("defining polynomial is not irreducible", {"poly": list(poly)})
    real_roots = intervals.count_real_roots(poly)
    if real_roots != d:
        raise FieldError(
            "defining polynomial is not totally real",
            {"poly": list(poly), "real_roots": real_roots},
        )


def _check_structure(K: NumberField) -> None:
    d = K.degree
    basis = K.integral_basis
    if basis[0] != tuple(Fraction(1 if k == 0 else 0) for k in range(d)):
        raise FieldError("first integral basis vector must be 1")
    for i in range(d):
        for j in range(d):
            if K.mult_table[i][j] != K.mult_table[j][i]:
                raise FieldError("multiplication table is not commutative", {"i": i, "j": j})
    for j in range(d):
        if K.mult_table[0][j] != numfield.basis_element(K, j).coords:
            raise FieldError("first basis vector does not act as the identity", {"j": j})
    for i in range(d):
        for j in range(i, d):
            expected = _poly_mul_mod(basis[i], basis[j], K.poly)
            stated = [
                sum((K.mult_table[i][j][k] * basis[k][c] for k in range(d)), Fraction(0))
                for c in range(d)
            ]
            if expected != stated:
                raise FieldError(
                    "multiplication table disagrees with the integral basis", {"i": i, "j": j}
                )
    if d <= ASSOCIATIVITY_CHECK_DEGREE:
        elements = [numfield.basis_element(K, i) for i in range(d)]
        for a, b, c in product(elements, repeat=3):
            left = numfield.mul(K, numfield.mul(K, a, b), c)
            right = numfield.mul(K, a, numfield.mul(K, b, c))
            if left != right:
                raise FieldError("multiplication table is not associative")


def _compose(first, second):
    """Matrix of ``first`` then ``second`` under row-vector action."""
    size = len(first)
    return tuple(
        tuple(sum(first[i][k] * second[k][j] for k in range(size)) for j in range(size))
        for i in range(size)
    )


def _check_automorphisms(K: NumberField) -> None:
    d = K.degree
    identity = numfield.unit_ideal(K).hnf
    group = set(K.automorphisms)
    if len(K.automorphisms) != d or len(group) != d:
        raise FieldError(
            "automorphisms must be d distinct matrices (K must be Galois)",
            {"expected": d, "got": len(group)},
        )
    if identity not in group:
        raise FieldError("automorphisms must contain the identity (K must be Galois)")
    for sigma in K.automorphisms:
        for tau in K.automorphisms:
            if _compose(sigma, tau) not in group:
                raise FieldError("automorphisms do not close under composition (K must be Galois)")
    one = numfield.one(K)
    for index in range(d):
        if numfield.apply_automorphism(K, index, one) != one:
            raise FieldError("automorphism does not fix 1", {"automorphism": index})
        for i in range(d):
            for j in range(i, d):
                bi = numfield.basis_element(K, i)
                bj = numfield.basis_element(K, j)
                image_of_product = numfield.apply_automorphism(K, index, numfield.mul(K, bi, bj))
                product_of_images = numfield.mul(
                    K,
                    numfield.apply_automorphism(K, index, bi),
                    numfield.apply_automorphism(K, index, bj),
                )
                if image_of_product != product_of_images:
                    raise FieldError("automorphism is not multiplicative", {"automorphism": index})


def _check_units(K: NumberField) -> None:
    if len(K.units) != K.degree - 1:
        raise FieldError(
            "unit basis must have d-1 elements", {"expected": K.degree - 1, "got": len(K.units)}
        )
    for unit in K.unit_elements:
        norm = numfield.element_norm(K, unit)
        if norm not in (1, -1):
            raise FieldError("unit has norm outside {1, -1}", {"unit": unit, "norm": norm})


def _build_primes(K: NumberField, entries: Any) -> Tuple[IntegralIdeal, ...]:
    if not isinstance(entries, list):
        raise FieldError("primes must be a list")
    primes = []
    seen_per_char: Dict[int, int] = {}
    for position, entry in enumerate(entries):
        for key in ("hnf", "residue_char", "e", "f"):
            if key not in entry:
                raise FieldError(f"prime entry is missing '{key}'", {"position": position})
        hnf = _int_matrix(entry["hnf"], K.degree, K.degree, "primes.hnf")
        if not lattice.is_canonical_hnf(hnf):
            raise FieldError("prime HNF is not canonical", {"position": position})
        q, e, f = entry["residue_char"], entry["e"], entry["f"]
        index = entry.get("index", seen_per_char.get(q, 0))
        seen_per_char[q] = index + 1
        prime = IntegralIdeal(hnf, residue_char=q, e=e, f=f, index=index)
        if not numfield.is_ideal(K, hnf):
            raise FieldError("prime HNF is not an ideal", {"position": position})
        if prime.norm != q ** f:
            raise FieldError("prime norm is not residue_char ** f", {"position": position, "norm": prime.norm})
        if not numfield.ideal_contains(prime, numfield.from_int(K, q)):
            raise FieldError("prime does not contain its residue characteristic", {"position": position})
        if numfield.residue_ring_is_field(K, prime) is False:
            raise FieldError("residue ring is not a field", {"position": position})
        primes.append(prime)
    keys = [p.key for p in primes]
    if len(set(keys)) != len(keys):
        raise FieldError("duplicate prime keys", {"keys": keys})
    return tuple(sorted(primes, key=lambda p: p.sort_key))


def _build_s_unit_generators(K: NumberField, entries: Any) -> Tuple[Tuple[str, Tuple[int, ...]], ...]:
    if not isinstance(entries, dict):
        raise FieldError("s_unit_generators must be an object keyed by prime key")
    result = []
    for key in sorted(entries, key=numfield.prime_key_order):
        generator = numfield.element(K, entries[key])
        prime = numfield.prime_by_key(K, key)
        if prime is None:
            raise FieldError("s_unit_generators names an unknown prime", {"key": key})
        principal = numfield.ideal_from_generators(K, [generator])
        exponent = numfield.valuation(K, prime, generator)
        if exponent == 0:
            raise FieldError("s-unit generator does not lie in its prime", {"key": key})
        if principal != numfield.ideal_power(K, prime, exponent):
            raise FieldError("s-unit generator is not a prime power generator", {"key": key})
        result.append((key, generator.coords))
    return tuple(result)


def make_field_from_config(cfg: Dict[str, Any]) -> NumberField:
    """
    Build a NumberField from a field-description document.

    Args:
        cfg: Parsed JSON document

    Returns:
        Validated NumberField

    Raises:
        FieldError: Naming the first invariant that fails
    """
    try:
        for key in REQUIRED_KEYS:
            if key not in cfg:
                raise FieldError(f"field description is missing '{key}'", {"key": key})
        d = cfg["degree"]
        if not isinstance(d, int) or d < 1:
            raise FieldError("degree must be a positive integer", {"degree": d})
        poly = tuple(int(c) for c in cfg["poly"])
        _check_polynomial(d, poly)
        if cfg["disc"] <= 0:
            raise FieldError("discriminant of a totally real field must be positive", {"disc": cfg["disc"]})
        basis_raw = cfg["integral_basis"]
        if not isinstance(basis_raw, list) or len(basis_raw) != d or any(len(row) != d for row in basis_raw):
            raise FieldError("integral_basis must be a d x d matrix")
        basis = tuple(tuple(_fraction_entry(x) for x in row) for row in basis_raw)
        mult_raw = cfg["mult_table"]
        if not isinstance(mult_raw, list) or len(mult_raw) != d:
            raise FieldError("mult_table must be d x d x d")
        mult_table = tuple(_int_matrix(layer, d, d, "mult_table") for layer in mult_raw)
        automorphisms_raw = cfg["automorphisms"]
        if not isinstance(automorphisms_raw, list):
            raise FieldError("automorphisms must be a list of matrices")
        automorphisms = tuple(_int_matrix(m, d, d, "automorphisms") for m in automorphisms_raw)
        units = tuple(tuple(int(c) for c in u) for u in cfg["units"])
        if any(len(u) != d for u in units):
            raise FieldError("unit coordinates must have length d")
        h = cfg["class_number"]
        if not isinstance(h, int) or h < 1:
            raise FieldError("class_number must be a positive integer", {"class_number": h})

        K = NumberField(
            degree=d,
            poly=poly,
            integral_basis=basis,
            mult_table=mult_table,
            disc=int(cfg["disc"]),
            automorphisms=automorphisms,
            units=units,
            class_number=h,
            label=cfg.get("label", f"{d}.{d}.{cfg['disc']}.1"),
            quadratic_m=cfg.get("quadratic_m"),
            narrow_class_number=cfg.get("narrow_class_number"),
        )
        _check_structure(K)
        _check_automorphisms(K)
        _check_units(K)
        if K.quadratic_m is not None and poly != (1, 0, -K.quadratic_m):
            raise FieldError("quadratic_m does not match the defining polynomial", {"m": K.quadratic_m})
        if "primes" in cfg:
            K = replace(K, primes=_build_primes(K, cfg["primes"]))
        if "s_unit_generators" in cfg:
            K = replace(K, s_unit_generators=_build_s_unit_generators(K, cfg["s_unit_generators"]))
        logger.info(f"Validated field {K.label} of degree {d}")
        return K
    except IdealError as e:
        logger.error(f"Field description rejected: {e.message}")
        raise FieldError(f"invalid ideal data: {e.message}", e.diagnostic) from e
    except (TypeError, KeyError, AttributeError) as e:
        logger.error(f"Field description is malformed: {str(e)}")
        raise FieldError(f"malformed field description: {str(e)}") from e
    except FieldError as e:
        logger.error(f"Field description rejected: {e.message}")
        raise


def load_field_config(path: str) -> NumberField:
    """
    Read and validate a field-description document from disk.
    """
    try:
        with open(Path(path), "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise FieldError(f"cannot read field description: {str(e)}", {"path": path}) from e
    return make_field_from_config(cfg)


def _fraction_out(value: Fraction) -> Any:
    return value.numerator if value.denominator == 1 else [value.numerator, value.denominator]


def field_to_config(K: NumberField) -> Dict[str, Any]:
    """
    Field-description document of ``K``; ``make_field_from_config`` inverts it.
    """
    cfg: Dict[str, Any] = {
        "label": K.label,
        "degree": K.degree,
        "poly": list(K.poly),
        "integral_basis": [[_fraction_out(x) for x in row] for row in K.integral_basis],
        "mult_table": [[list(v) for v in layer] for layer in K.mult_table],
        "disc": K.disc,
        "automorphisms": [[list(row) for row in m] for m in K.automorphisms],
        "units": [list(u) for u in K.units],
        "class_number": K.class_number,
    }
    if K.quadratic_m is not None:
        cfg["quadratic_m"] = K.quadratic_m
    if K.narrow_class_number is not None:
        cfg["narrow_class_number"] = K.narrow_class_number
    if K.primes:
        cfg["primes"] = [
            {"hnf": [list(r) for r in p.hnf], "residue_char": p.residue_char, "e": p.e, "f": p.f, "index": p.index}
            for p in K.primes
        ]
    if K.s_unit_generators:
        cfg["s_unit_generators"] = {key: list(g) for key, g in K.s_unit_generators}
    return cfg
