"""
The elimination sieve and the assembly of C_{K,S}.

Forms with a non-rational eigenvalue at some prime outside S are
eliminated through the Hasse-Weil product bound; forms with rational
eigenvalues are compared with each of their quadratic twists. Every
eliminated verdict carries the integers whose prime divisors bound p, and
``recheck_verdict`` recomputes its contribution from those integers alone.
"""

import logging
from dataclasses import dataclass, field
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple

from . import numfield
from .characters import CharacterSet, QuadraticCharacter, character_value
from .exceptions import DatasetError
from .forms import EigenformRecord, FormDataset, hecke_norm, hecke_shift
from .irreducibility import IrreducibilityBound
from .levels import LevelData
from .numfield import IntegralIdeal, NumberField
from .worker_pool import WorkerPool

ELIMINATED_NONRATIONAL = "eliminated_nonrational"
ELIMINATED_TWIST_MISMATCH = "eliminated_twist_mismatch"
SURVIVES_CM = "survives_cm"
INCONCLUSIVE = "inconclusive_data_exhausted"

OUTCOMES = (ELIMINATED_NONRATIONAL, ELIMINATED_TWIST_MISMATCH, SURVIVES_CM, INCONCLUSIVE)

GALOIS_NOTICE = "K is assumed Galois; totally real fields that are not Galois are not covered"
CM_NOTICE = "CM survivors are certified up to data coverage; identifying the CM curves is not attempted"


@dataclass(frozen=True)
class FormVerdict:
    label: str
    outcome: str
    contribution: int
    witness: Dict = field(default_factory=dict, hash=False)
    character: Optional[str] = None
    coverage: Optional[int] = None
    warnings: Tuple[str, ...] = ()


@dataclass(frozen=True)
class BoundReport:
    field_summary: Dict
    S: Tuple[str, ...]
    irreducibility: IrreducibilityBound
    level: LevelData
    verdicts: Tuple[FormVerdict, ...]
    C: int
    surviving: Tuple[Tuple[str, str], ...]
    conditional: bool
    missing_data: Tuple[str, ...]
    notices: Tuple[str, ...]
    characters: Tuple[str, ...] = ()
    pruned_characters: Tuple[Dict, ...] = ()
    dataset: Dict = field(default_factory=dict, hash=False)


def _is_rational_vector(coords: Sequence[int]) -> bool:
    return not any(coords[1:])


def good_reduction_factors(hecke_poly: Sequence[int], a: Sequence[int], norm: int) -> List[int]:
    """Norm(a - t) for every integer |t| <= 2 sqrt(norm)."""
    bound = isqrt(4 * norm)
    return [hecke_norm(hecke_poly, hecke_shift(a, t)) for t in range(-bound, bound + 1)]


def multiplicative_factors(hecke_poly: Sequence[int], a: Sequence[int], norm: int) -> Tuple[int, int]:
    """Norm(a - (N + 1)) and Norm(a + (N + 1))."""
    return (
        hecke_norm(hecke_poly, hecke_shift(a, norm + 1)),
        hecke_norm(hecke_poly, hecke_shift(a, -(norm + 1))),
    )


def _product(values: Sequence[int]) -> int:
    result = 1
    for value in values:
        result *= value
    return result


def twist_case_values(a: int, norm: int) -> Tuple[int, int, int]:
    """(N, |2a|, (N+1)^2 - a^2) for a twist mismatch at a prime of norm N."""
    return norm, abs(2 * a), (norm + 1) ** 2 - a * a


def _prime_of(K: NumberField, f: EigenformRecord, key: str) -> IntegralIdeal:
    prime = numfield.prime_by_key(K, key)
    if prime is None:
        raise DatasetError("eigenvalue key is not a prime of the field", {"label": f.label, "key": key})
    return prime


def nonrational_form_bound(f: EigenformRecord, S: Sequence[IntegralIdeal], K: NumberField) -> FormVerdict:
    """
    Eliminate a form with non-rational Hecke field through its first covered
    prime outside S with a non-rational eigenvalue.

    Raises:
        DatasetError: If the Hecke field of ``f`` is Q, or a key names no prime of K
    """
    if f.is_base_field_rational:
        raise DatasetError("nonrational_form_bound needs a non-rational Hecke field", {"label": f.label})
    s_keys = {prime.key for prime in S}
    poly = f.hecke_field.poly
    for key in f.prime_keys():
        a = f.eigenvalues[key]
        if key in s_keys or _is_rational_vector(a):
            continue
        norm = _prime_of(K, f, key).norm
        factors = good_reduction_factors(poly, a, norm)
        if any(x == 0 for x in factors):
            raise DatasetError("Norm(a - t) vanished for a non-rational eigenvalue", {"label": f.label, "prime": key})
        good = abs(_product(factors))
        mult = multiplicative_factors(poly, a, norm)
        multiplicative = abs(mult[0] * mult[1])
        contribution = max(norm, good, multiplicative)
        witness = {
            "prime": key,
            "norm": norm,
            "eigenvalue": list(a),
            "t_bound": isqrt(4 * norm),
            "good_reduction_factors": factors,
            "good_reduction_product": good,
            "multiplicative_factors": list(mult),
            "multiplicative_product": multiplicative,
        }
        return FormVerdict(f.label, ELIMINATED_NONRATIONAL, contribution, witness)
    return FormVerdict(
        f.label,
        INCONCLUSIVE,
        0,
        {"reason": "no covered prime outside S with a non-rational eigenvalue"},
        warnings=("data exhausted: no usable non-rational eigenvalue",),
    )


def _analyse_character(
    f: EigenformRecord, psi: QuadraticCharacter, covered: List[Tuple[str, IntegralIdeal]], K: NumberField
) -> Dict:
    checked = 0
    largest = 0
    for key, prime in covered:
        value = character_value(K, psi, prime)
        if value == 0:
            continue
        checked += 1
        largest = max(largest, prime.norm)
        a = f.eigenvalues[key][0]
        if value == -1 and a != 0:
            cases = twist_case_values(a, prime.norm)
            return {
                "character": psi.label,
                "status": "mismatch",
                "prime": key,
                "norm": prime.norm,
                "a": a,
                "cases": list(cases),
                "contribution": max(cases),
            }
    if checked:
        return {"character": psi.label, "status": "cm", "coverage": largest, "checked_primes": checked}
    return {"character": psi.label, "status": "inconclusive", "coverage": largest}


def rational_form_analysis(
    f: EigenformRecord, characters: Sequence[QuadraticCharacter], S: Sequence[IntegralIdeal], K: NumberField
) -> FormVerdict:
    """
    Compare a rational form with each of its quadratic twists.

    A character certifies CM when no covered prime outside S shows a
    mismatch, that is the form vanishes wherever the character is -1. A
    mismatch at the first such prime bounds p by max(N, |2a|, (N+1)^2 - a^2),
    and the form's contribution is the maximum over characters. A character
    that is 0 at every covered prime leaves the form undecided.
    """
    if not f.is_base_field_rational:
        raise DatasetError("rational_form_analysis needs a rational Hecke field", {"label": f.label})
    s_keys = {prime.key for prime in S}
    covered = []
    for key in f.prime_keys():
        if key in s_keys:
            continue
        covered.append((key, _prime_of(K, f, key)))

    warnings = []
    if f.eigenvalues and all(not any(v) for v in f.eigenvalues.values()):
        warnings.append("degenerate data: every stored eigenvalue is zero")
    if not characters:
        return FormVerdict(f.label, INCONCLUSIVE, 0, {"reason": "no quadratic characters"}, warnings=tuple(warnings))

    analyses = [_analyse_character(f, psi, covered, K) for psi in characters]
    cm = [entry for entry in analyses if entry["status"] == "cm"]
    mismatches = [entry for entry in analyses if entry["status"] == "mismatch"]
    partial = max((entry["contribution"] for entry in mismatches), default=0)
    witness = {"characters": analyses}

    if cm:
        first = cm[0]
        return FormVerdict(
            f.label,
            SURVIVES_CM,
            0,
            witness,
            character=first["character"],
            coverage=first["coverage"],
            warnings=tuple(warnings),
        )
    if len(mismatches) < len(analyses):
        undecided = [entry["character"] for entry in analyses if entry["status"] == "inconclusive"]
        warnings.append("data exhausted for character(s): " + ", ".join(undecided))
        return FormVerdict(f.label, INCONCLUSIVE, partial, witness, warnings=tuple(warnings))
    return FormVerdict(f.label, ELIMINATED_TWIST_MISMATCH, partial, witness, warnings=tuple(warnings))


def recheck_verdict(verdict: FormVerdict) -> bool:
    """
    Recompute an eliminated verdict's contribution from its witness integers.
    """
    witness = verdict.witness
    if verdict.outcome == ELIMINATED_NONRATIONAL:
        factors = witness["good_reduction_factors"]
        if len(factors) != 2 * witness["t_bound"] + 1 or any(x == 0 for x in factors):
            return False
        if isqrt(4 * witness["norm"]) != witness["t_bound"]:
            return False
        good = abs(_product(factors))
        mult = abs(witness["multiplicative_factors"][0] * witness["multiplicative_factors"][1])
        if good != witness["good_reduction_product"] or mult != witness["multiplicative_product"]:
            return False
        return verdict.contribution == max(witness["norm"], good, mult) > 0
    if verdict.outcome == ELIMINATED_TWIST_MISMATCH:
        contributions = []
        for entry in witness["characters"]:
            if entry["status"] != "mismatch" or entry["a"] == 0:
                return False
            cases = twist_case_values(entry["a"], entry["norm"])
            if list(cases) != entry["cases"] or min(cases[1:]) <= 0:
                return False
            contributions.append(max(cases))
        return verdict.contribution == max(contributions) > 0
    return True


class EliminationSieve:
    """
    Runs the per-form analysis for a fixed field, S and character set.
    """

    def __init__(
        self,
        K: NumberField,
        S: Sequence[IntegralIdeal],
        characters: CharacterSet,
        pool: Optional[WorkerPool] = None,
    ):
        self.K = K
        self.S = list(S)
        self.characters = characters
        self.pool = pool
        self.logger = logging.getLogger(__name__)

    def analyse(self, f: EigenformRecord) -> FormVerdict:
        """
        Verdict for a single form.
        """
        try:
            if f.is_base_field_rational:
                verdict = rational_form_analysis(f, self.characters.characters, self.S, self.K)
            else:
                verdict = nonrational_form_bound(f, self.S, self.K)
            self.logger.debug(f"{f.label}: {verdict.outcome} (contribution {verdict.contribution})")
            return verdict

        except Exception as e:
            self.logger.error(f"Failed to analyse form {f.label}: {str(e)}")
            raise

    def run(self, records: Sequence[EigenformRecord]) -> List[FormVerdict]:
        """
        Verdicts for every record, ordered by label.
        """
        ordered = sorted(records, key=lambda r: r.label)
        if self.pool is None:
            verdicts = [self.analyse(f) for f in ordered]
        else:
            verdicts = self.pool.map_ordered(self.analyse, ordered)
        for verdict in verdicts:
            for warning in verdict.warnings:
                self.logger.warning(f"{verdict.label}: {warning}")
        return verdicts


def assemble_constant(
    K: NumberField,
    S: Sequence[IntegralIdeal],
    irr: IrreducibilityBound,
    level: LevelData,
    dataset: Optional[FormDataset],
    verdicts: Sequence[FormVerdict],
    characters: Optional[CharacterSet] = None,
    notices: Sequence[str] = (),
) -> BoundReport:
    """
    C_{K,S} as the maximum of the irreducibility threshold and every contribution.

    Returns:
        BoundReport; conditional when any verdict is inconclusive
    """
    verdicts = tuple(sorted(verdicts, key=lambda v: v.label))
    C = max([irr.threshold] + [v.contribution for v in verdicts])
    surviving = tuple((v.label, v.character) for v in verdicts if v.outcome == SURVIVES_CM)
    missing = []
    for v in verdicts:
        if v.outcome == INCONCLUSIVE:
            detail = "; ".join(v.warnings) or v.witness.get("reason", "")
            missing.append(f"{v.label}: {detail}")
    all_notices = [GALOIS_NOTICE]
    if surviving:
        all_notices.append(CM_NOTICE)
    all_notices.extend(notices)
    units = [numfield.element_norm(K, u) for u in K.unit_elements]
    field_summary = {
        "label": K.label,
        "degree": K.degree,
        "poly": list(K.poly),
        "disc": K.disc,
        "class_number": K.class_number,
        "narrow_class_number": K.narrow_class_number,
        "units": [list(u) for u in K.units],
        "unit_norms": units,
    }
    dataset_summary: Dict = {}
    if dataset is not None:
        dataset_summary = {
            "field": dataset.field_label,
            "records": len(dataset.records),
            "prime_coverage": dataset.prime_coverage,
            "provenance": dict(sorted(dataset.provenance.items())),
        }
    return BoundReport(
        field_summary=field_summary,
        S=tuple(p.key for p in sorted(S, key=lambda p: p.sort_key)),
        irreducibility=irr,
        level=level,
        verdicts=verdicts,
        C=C,
        surviving=surviving,
        conditional=bool(missing),
        missing_data=tuple(missing),
        notices=tuple(all_notices),
        characters=tuple(psi.label for psi in characters.characters) if characters else (),
        pruned_characters=tuple(characters.pruned) if characters else (),
        dataset=dataset_summary,
    )
