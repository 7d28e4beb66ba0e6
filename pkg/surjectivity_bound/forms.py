"""
Hilbert eigenform datasets: data model, ingestion, validation and
canonical serialization.

Eigenvalues are exact integer coordinates over the power basis of the
Hecke field Q_f = Q[x]/(hecke_poly). Every stored a_l is checked against
the Hasse-Weil box |iota(a_l)| <= 2 sqrt(N l) at every real embedding of
Q_f with certified interval arithmetic.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import Poly

from . import intervals, lattice, numfield
from .exceptions import DatasetError, IdealError
from .numfield import IntegralIdeal, NumberField

logger = logging.getLogger(__name__)

FORM_KEYS = ("label", "level_hnf", "level_norm", "weight", "hecke_poly", "eigenvalues")

# Irreducibility of the Hecke polynomial is re-checked up to this degree.
IRREDUCIBILITY_RECHECK_DEGREE = 4


@dataclass(frozen=True)
class HeckeField:
    degree: int
    poly: Tuple[int, ...]

    @property
    def rational(self) -> bool:
        return self.degree == 1


@dataclass(frozen=True)
class EigenformRecord:
    label: str
    level: IntegralIdeal
    level_norm: int
    weight: int
    hecke_field: HeckeField
    eigenvalues: Dict[str, Tuple[int, ...]] = field(compare=True, hash=False)

    @property
    def is_base_field_rational(self) -> bool:
        return self.hecke_field.rational

    def prime_keys(self) -> List[str]:
        return sorted(self.eigenvalues, key=numfield.prime_key_order)


@dataclass(frozen=True)
class FormDataset:
    field_label: str
    records: Tuple[EigenformRecord, ...]
    provenance: Dict[str, str] = field(default_factory=dict, compare=False, hash=False)
    primes: Dict[str, Tuple[Tuple[int, ...], ...]] = field(default_factory=dict, hash=False)

    @property
    def prime_coverage(self) -> List[str]:
        """Prime keys present in every record, in prime-key order."""
        if not self.records:
            return []
        common = set(self.records[0].eigenvalues)
        for record in self.records[1:]:
            common &= set(record.eigenvalues)
        return sorted(common, key=numfield.prime_key_order)


def eigenvalue_at(record: EigenformRecord, prime_key: str) -> Optional[Tuple[int, ...]]:
    """Stored a_l at the prime, or None when the dataset does not cover it."""
    return record.eigenvalues.get(prime_key)


# ---------------------------------------------------------------------------
# Hecke field arithmetic
# ---------------------------------------------------------------------------


def _poly_from_power_coeffs(coeffs: Sequence[int]) -> Poly:
    return Poly(list(reversed([int(c) for c in coeffs])) or [0], intervals.X)


def hecke_norm(hecke_poly: Sequence[int], coeffs: Sequence[int]) -> int:
    """
    Norm from Q_f to Q of the element with power-basis coordinates ``coeffs``.

    For monic f the norm of g(theta) is the resultant Res(f, g).
    """
    degree = len(hecke_poly) - 1
    if not any(coeffs[1:]):
        return int(coeffs[0]) ** degree
    value = intervals.defining_poly(hecke_poly).resultant(_poly_from_power_coeffs(coeffs))
    if isinstance(value, Poly):
        value = value.as_expr()
    return int(value)


def hecke_shift(coeffs: Sequence[int], t: int) -> Tuple[int, ...]:
    """Coordinates of a - t."""
    return (coeffs[0] - t,) + tuple(coeffs[1:])


def hasse_weil_excess(hecke_poly: Sequence[int], coeffs: Sequence[int], norm: int) -> Tuple[Fraction, ...]:
    """Power-basis coordinates of a^2 - 4N reduced modulo the Hecke polynomial."""
    poly = intervals.defining_poly(hecke_poly)
    a = _poly_from_power_coeffs(coeffs)
    square = (a * a).rem(poly)
    ascending = [int(c) for c in reversed(square.all_coeffs())]
    ascending += [0] * (len(hecke_poly) - 1 - len(ascending))
    ascending[0] -= 4 * norm
    return tuple(Fraction(c) for c in ascending)


def within_hasse_weil(hecke_field: HeckeField, coeffs: Sequence[int], norm: int) -> bool:
    """
    |iota(a)| <= 2 sqrt(norm) for every real embedding iota, decided exactly.
    """
    if hecke_field.rational:
        return coeffs[0] * coeffs[0] <= 4 * norm
    excess = hasse_weil_excess(hecke_field.poly, coeffs, norm)
    if not any(excess):
        return True
    return all(sign < 0 for sign in intervals.certified_signs(hecke_field.poly, excess))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _fail(message: str, label: Optional[str] = None, **diagnostic) -> DatasetError:
    if label is not None:
        diagnostic["label"] = label
    return DatasetError(message, diagnostic)


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _parse_hnf(value: Any, label: Optional[str], dimension: Optional[int]) -> Tuple[Tuple[int, ...], ...]:
    if not isinstance(value, list) or not value or not all(isinstance(row, list) for row in value):
        raise _fail("level HNF must be a square integer matrix", label)
    size = len(value)
    if any(len(row) != size or not all(_is_int(x) for x in row) for row in value):
        raise _fail("level HNF must be a square integer matrix", label)
    if dimension is not None and size != dimension:
        raise _fail("level HNF has the wrong dimension", label, expected=dimension, got=size)
    hnf = tuple(tuple(row) for row in value)
    if not lattice.is_canonical_hnf(hnf):
        raise _fail("level HNF is not canonical", label)
    return hnf


def parse_hecke_field(poly: Any, label: Optional[str] = None) -> HeckeField:
    if not isinstance(poly, list) or len(poly) < 2 or not all(_is_int(c) for c in poly):
        raise _fail("hecke_poly must be an integer coefficient list of degree >= 1", label)
    if poly[0] != 1:
        raise _fail("hecke_poly must be monic", label)
    degree = len(poly) - 1
    if 1 < degree <= IRREDUCIBILITY_RECHECK_DEGREE and not intervals.defining_poly(poly).is_irreducible:
        raise _fail("hecke_poly is not irreducible", label)
    if intervals.count_real_roots(poly) != degree:
        raise _fail("Hecke field is not totally real", label)
    return HeckeField(degree=degree, poly=tuple(poly))


def _parse_weight(value: Any, label: str) -> int:
    weights = value if isinstance(value, list) else [value]
    if not weights or any(w != 2 or not _is_int(w) for w in weights):
        raise _fail("parallel weight must be 2", label, weight=value)
    return 2


def _parse_record(raw: Any, dimension: Optional[int], K: Optional[NumberField]) -> EigenformRecord:
    if not isinstance(raw, dict):
        raise _fail("each form must be an object")
    label = raw.get("label")
    for key in FORM_KEYS:
        if key not in raw:
            raise _fail(f"form is missing '{key}'", label if isinstance(label, str) else None)
    if not isinstance(label, str) or not label:
        raise _fail("form label must be a non-empty string")
    weight = _parse_weight(raw["weight"], label)
    hnf = _parse_hnf(raw["level_hnf"], label, dimension)
    level = IntegralIdeal(hnf)
    if not _is_int(raw["level_norm"]) or raw["level_norm"] != level.norm:
        raise _fail("level_norm does not match the level HNF", label, level_norm=raw["level_norm"], hnf_norm=level.norm)
    if K is not None and not numfield.is_ideal(K, hnf):
        raise _fail("level HNF is not an ideal of the field", label)
    hecke_field = parse_hecke_field(raw["hecke_poly"], label)

    if not isinstance(raw["eigenvalues"], dict):
        raise _fail("eigenvalues must be an object keyed by prime key", label)
    eigenvalues: Dict[str, Tuple[int, ...]] = {}
    for key, vector in raw["eigenvalues"].items():
        try:
            _, norm, _ = numfield.parse_prime_key(key)
        except IdealError:
            raise _fail("malformed prime key", label, key=key)
        if K is not None and numfield.prime_by_key(K, key) is None:
            raise _fail("eigenvalue key is not a prime of the field", label, key=key)
        if not isinstance(vector, list) or not all(_is_int(c) for c in vector):
            raise _fail("eigenvalue must be an integer coordinate list", label, key=key)
        if len(vector) != hecke_field.degree:
            raise _fail(
                "eigenvalue vector has wrong length", label, key=key, expected=hecke_field.degree, got=len(vector)
            )
        try:
            within = within_hasse_weil(hecke_field, vector, norm)
        except ValueError:
            raise _fail("eigenvalue could not be certified against the Hasse-Weil bound", label, key=key)
        if not within:
            raise _fail("Hasse-Weil bound violated", label, prime=key, eigenvalue=vector)
        eigenvalues[key] = tuple(vector)
    ordered = {key: eigenvalues[key] for key in sorted(eigenvalues, key=numfield.prime_key_order)}
    return EigenformRecord(
        label=label,
        level=level,
        level_norm=level.norm,
        weight=weight,
        hecke_field=hecke_field,
        eigenvalues=ordered,
    )


def dataset_from_dict(
    document: Any, K: Optional[NumberField] = None, provenance: Optional[Dict[str, str]] = None
) -> FormDataset:
    """
    Validate a parsed dataset document.

    Args:
        document: Parsed JSON
        K: Base field; enables the ideal, label and prime checks
        provenance: Source description recorded on the dataset

    Returns:
        FormDataset with records sorted by label

    Raises:
        DatasetError: On the first schema or validation failure
    """
    if not isinstance(document, dict) or "field" not in document or "forms" not in document:
        raise _fail("dataset must be an object with 'field' and 'forms'")
    field_label = document["field"]
    if not isinstance(field_label, str):
        raise _fail("'field' must be a string label")
    if K is not None and field_label != K.label:
        raise _fail("dataset field does not match the base field", None, dataset=field_label, field=K.label)
    if not isinstance(document["forms"], list):
        raise _fail("'forms' must be an array")
    dimension = K.degree if K is not None else None

    primes: Dict[str, Tuple[Tuple[int, ...], ...]] = {}
    for key, hnf in (document.get("primes") or {}).items():
        try:
            numfield.parse_prime_key(key)
        except IdealError:
            raise _fail("malformed prime key", None, key=key)
        parsed = _parse_hnf(hnf, None, dimension)
        if K is not None:
            known = numfield.prime_by_key(K, key)
            if known is None or known.hnf != parsed:
                raise _fail("prime HNF does not match the field", None, key=key)
        primes[key] = parsed

    records = []
    seen = set()
    for raw in document["forms"]:
        record = _parse_record(raw, dimension, K)
        if record.label in seen:
            raise _fail("duplicate form label", record.label)
        seen.add(record.label)
        if dimension is None:
            dimension = len(record.level.hnf)
        elif len(record.level.hnf) != dimension:
            raise _fail("level HNF has the wrong dimension", record.label)
        records.append(record)
    records.sort(key=lambda r: r.label)
    dataset = FormDataset(
        field_label=field_label,
        records=tuple(records),
        provenance=dict(provenance or {}),
        primes=primes,
    )
    logger.info(f"Loaded {len(records)} form(s) for field {field_label}")
    return dataset


def load_dataset(path: str, K: Optional[NumberField] = None) -> FormDataset:
    """
    Read and validate a dataset file.

    Raises:
        DatasetError: If the file cannot be read or fails validation
    """
    try:
        with open(Path(path), "r", encoding="utf-8") as fh:
            document = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise DatasetError(f"cannot read dataset: {str(e)}", {"path": path}) from e
    try:
        return dataset_from_dict(document, K, {"source": str(path)})
    except DatasetError as e:
        logger.error(f"Dataset {path} rejected: {e.message}")
        raise


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def dataset_to_dict(dataset: FormDataset) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        "field": dataset.field_label,
        "forms": [
            {
                "label": r.label,
                "level_hnf": [list(row) for row in r.level.hnf],
                "level_norm": r.level_norm,
                "weight": r.weight,
                "hecke_poly": list(r.hecke_field.poly),
                "eigenvalues": {key: list(value) for key, value in r.eigenvalues.items()},
            }
            for r in dataset.records
        ],
    }
    if dataset.primes:
        document["primes"] = {key: [list(row) for row in hnf] for key, hnf in dataset.primes.items()}
    return document


def dump_dataset(dataset: FormDataset) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(dataset_to_dict(dataset), sort_keys=True, indent=2) + "\n"


def canonicalize(text: str) -> str:
    """Canonical form of a dataset document given as text (validated on the way)."""
    return dump_dataset(dataset_from_dict(json.loads(text)))


def save_dataset(dataset: FormDataset, path: str) -> None:
    Path(path).write_text(dump_dataset(dataset), encoding="utf-8")


def forms_of_level_dividing(
    K: NumberField, dataset: FormDataset, M: IntegralIdeal
) -> Tuple[List[EigenformRecord], List[str]]:
    """
    Split records into those whose level divides M and the labels of the rest.
    """
    kept, dropped = [], []
    for record in dataset.records:
        if numfield.ideal_divides(record.level, M):
            kept.append(record)
        else:
            dropped.append(record.label)
    if dropped:
        logger.warning(f"{len(dropped)} form(s) have level not dividing M and are skipped: {', '.join(dropped)}")
    return kept, dropped
