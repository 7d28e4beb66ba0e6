"""
Brute-force verification suites for the GL2 laboratory.

Everything here is reproducible from ``(p, seed)``: random trials are
split into fixed-size chunks, each chunk draws from its own
``random.Random`` seeded by ``"{seed}-{p}-{chunk}"``, and chunk results are
merged in chunk order whatever the number of workers.
"""

import logging
import random
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Tuple

from sympy.ntheory import is_quad_residue, primitive_root

from . import gl2
from .exceptions import GroupError
from .gl2 import Mat, MatrixGroup
from .worker_pool import WorkerPool

logger = logging.getLogger(__name__)

# Plus-part claims are checked on every B up to this prime.
EXHAUSTIVE_CLAIM_LIMIT = 13
DEFAULT_CLAIM_SAMPLE = 2000
TRIAL_CHUNK = 500
# The projective-order deduction needs p >= 7.
DICHOTOMY_MIN_PRIME = 7

NORMALIZER_TAGS = (gl2.NORMALIZER_SPLIT, gl2.NORMALIZER_NONSPLIT)


@dataclass
class PlusPartReport:
    p: int
    kind: str
    exhaustive: bool
    checked: int = 0
    counterexamples: List[List[int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples


@dataclass
class SubgroupSurvey:
    p: int
    trials: int
    seed: int
    tag_counts: Dict[str, int]
    dichotomy_enforced: bool
    dichotomy_checked: int
    dichotomy_passed: int
    cartan_checked: int
    counterexamples: List[Dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples


def random_element(p: int, rng: random.Random) -> Mat:
    while True:
        m = tuple(rng.randrange(p) for _ in range(4))
        if gl2.det(m, p):
            return m


def random_normalizer_element(p: int, kind: str, rng: random.Random, allow_outer: bool = True) -> Mat:
    """
    Random element of the standard split or non-split Cartan normalizer.
    """
    if kind == "split":
        g = primitive_root(p)
        m = gl2.diag(pow(g, rng.randrange(p - 1), p), pow(g, rng.randrange(p - 1), p), p)
        outer: Mat = (0, 1, 1, 0)
    else:
        m = gl2.mat_pow(gl2.nonsplit_cartan_generator(p), rng.randrange(p * p - 1), p)
        outer = gl2.diag(1, -1, p)
    if allow_outer and rng.random() < 0.5:
        m = gl2.mat_mul(m, outer, p)
    return m


def _claim_inputs(p: int, kind: str) -> Tuple[Mat, Mat, List[gl2.Line]]:
    if kind == "ordinary":
        g = primitive_root(p)
        base = gl2.diag(g, 1, p)
    else:
        base = gl2.nonsplit_cartan_generator(p)
    return base, gl2.mat_mul(base, base, p), gl2.eigenlines(base, p)


def _claim_holds(p: int, base: Mat, base_squared: Mat, lines: List[gl2.Line], B: Mat) -> Optional[bool]:
    """None when B fixes one of the lines (outside the claim), else the verdict."""
    if any(gl2.fixes_line(B, v, p) for v in lines):
        return None
    shift = 0 if is_quad_residue(gl2.det(B, p), p) else 1
    second = gl2.mat_mul(B, gl2.mat_pow(base, shift, p), p)
    irreducible, _ = gl2.is_absolutely_irreducible(MatrixGroup(p, [base_squared, second]))
    return irreducible


def plus_part_claim_report(
    p: int, kind: str = "ordinary", seed: int = 0, sample_size: int = DEFAULT_CLAIM_SAMPLE
) -> PlusPartReport:
    """
    Check that <A^2, B A^s> is absolutely irreducible for every B moving
    both eigenlines of A, with A the inertia generator of the given kind and
    s chosen so that det(B A^s) is a square.

    Exhaustive up to ``EXHAUSTIVE_CLAIM_LIMIT``, a seeded sample above.
    """
    gl2.check_prime(p)
    if p < 5:
        raise GroupError("the plus-part claim needs p >= 5 (A^2 is scalar at p = 3)", {"p": p})
    if kind not in ("ordinary", "supersingular"):
        raise GroupError("kind must be 'ordinary' or 'supersingular'", {"kind": kind})
    base, base_squared, lines = _claim_inputs(p, kind)
    exhaustive = p <= EXHAUSTIVE_CLAIM_LIMIT
    report = PlusPartReport(p=p, kind=kind, exhaustive=exhaustive)

    if exhaustive:
        candidates = (m for m in product(range(p), repeat=4) if gl2.det(m, p))
    else:
        rng = random.Random(f"{seed}-{p}-{kind}")
        candidates = (random_element(p, rng) for _ in range(sample_size))

    for B in candidates:
        verdict = _claim_holds(p, base, base_squared, lines, B)
        if verdict is None:
            continue
        report.checked += 1
        if not verdict:
            report.counterexamples.append(list(B))
    logger.info(
        f"Plus-part claim ({kind}) at p={p}: {report.checked} checked, "
        f"{len(report.counterexamples)} counterexample(s)"
    )
    return report


def verify_ordinary_plus_part_claim(p: int, seed: int = 0) -> bool:
    return plus_part_claim_report(p, "ordinary", seed).passed


def verify_supersingular_plus_part_claim(p: int, seed: int = 0) -> bool:
    return plus_part_claim_report(p, "supersingular", seed).passed


def _trial_generators(p: int, rng: random.Random) -> Tuple[str, List[Mat]]:
    mode = rng.choice(("uniform", "split", "nonsplit", "split_cartan", "nonsplit_cartan"))
    count = rng.randint(1, 3)
    if mode == "uniform":
        return mode, [random_element(p, rng) for _ in range(count)]
    kind = "split" if mode.startswith("split") else "nonsplit"
    outer = not mode.endswith("_cartan")
    P = random_element(p, rng)
    gens = [gl2.conjugate(P, random_normalizer_element(p, kind, rng, outer), p) for _ in range(count)]
    return mode, gens


def _run_trial(p: int, mode: str, gens: List[Mat], enforce: bool) -> Dict:
    G = MatrixGroup(p, gens)
    classification = gl2.projective_image_type(G)
    irreducible, _ = gl2.is_absolutely_irreducible(G)
    result = {"tag": classification.tag, "dichotomy": None, "cartan": None, "failure": None}

    if mode.endswith("_cartan"):
        result["cartan"] = not irreducible
        if irreducible:
            result["failure"] = "Cartan-contained group is absolutely irreducible"

    if irreducible and classification.tag != gl2.CONTAINS_SL2:
        elements, _ = gl2.projective_image(G)
        orders = {gl2.projective_order(m, p) for m in elements}
        if (p - 1) in orders or (p + 1) in orders:
            holds = classification.tag in NORMALIZER_TAGS
            result["dichotomy"] = holds
            if enforce and not holds:
                result["failure"] = "irreducible group with projective order p-1 or p+1 outside every Cartan normalizer"
    return result


def _run_chunk(p: int, seed: int, chunk: int, size: int) -> List[Dict]:
    rng = random.Random(f"{seed}-{p}-{chunk}")
    enforce = p >= DICHOTOMY_MIN_PRIME
    results = []
    for _ in range(size):
        mode, gens = _trial_generators(p, rng)
        result = _run_trial(p, mode, gens, enforce)
        result["generators"] = [list(g) for g in gens]
        results.append(result)
    return results


def classify_random_subgroups(
    p: int, trials: int = 10_000, seed: int = 0, pool: Optional[WorkerPool] = None
) -> SubgroupSurvey:
    """
    Classify seeded random subgroups and check the projective-order dichotomy.

    Args:
        p: Odd prime
        trials: Number of random subgroups
        seed: Seed of the trial sequence
        pool: Optional worker pool; chunk results merge in chunk order

    Returns:
        SubgroupSurvey with per-tag counts and any counterexamples
    """
    gl2.check_prime(p)
    chunks = [(index, min(TRIAL_CHUNK, trials - start)) for index, start in enumerate(range(0, trials, TRIAL_CHUNK))]
    work = lambda item: _run_chunk(p, seed, item[0], item[1])
    if pool is None:
        chunk_results = [work(item) for item in chunks]
    else:
        chunk_results = pool.map_ordered(work, chunks)

    survey = SubgroupSurvey(
        p=p,
        trials=trials,
        seed=seed,
        tag_counts={tag: 0 for tag in gl2.TAGS},
        dichotomy_enforced=p >= DICHOTOMY_MIN_PRIME,
        dichotomy_checked=0,
        dichotomy_passed=0,
        cartan_checked=0,
    )
    for results in chunk_results:
        for result in results:
            survey.tag_counts[result["tag"]] += 1
            if result["dichotomy"] is not None:
                survey.dichotomy_checked += 1
                survey.dichotomy_passed += int(result["dichotomy"])
            if result["cartan"] is not None:
                survey.cartan_checked += 1
            if result["failure"]:
                survey.counterexamples.append(
                    {"generators": result["generators"], "tag": result["tag"], "reason": result["failure"]}
                )
    logger.info(
        f"p={p}: {trials} random subgroups, dichotomy {survey.dichotomy_passed}/{survey.dichotomy_checked}, "
        f"{len(survey.counterexamples)} counterexample(s)"
    )
    return survey


def _outside_every_split_cartan(p: int, m: Mat) -> bool:
    """No conjugate of m is diagonal (searched over GL2(F_p))."""
    for g in product(range(p), repeat=4):
        if gl2.det(g, p) == 0:
            continue
        c = gl2.conjugate(g, m, p)
        if c[1] == 0 and c[2] == 0:
            return False
    return True


def structural_checks(p: int) -> Dict:
    """
    Orders of the Cartan subgroups and normalizers, normalizer indices,
    inertia shapes and closure of every materialized group.
    """
    gl2.check_prime(p, gl2.ENUMERATION_LIMIT)
    Cs = gl2.split_cartan(p)
    Cns = gl2.nonsplit_cartan(p)
    Ns = gl2.cartan_normalizer(Cs)
    Nns = gl2.cartan_normalizer(Cns)
    ordinary = gl2.inertia_shape_subgroups(p, "ordinary")
    supersingular = gl2.inertia_shape_subgroups(p, "supersingular")
    checks = {
        "split_cartan_order": Cs.order(),
        "nonsplit_cartan_order": Cns.order(),
        "split_normalizer_order": Ns.order(),
        "nonsplit_normalizer_order": Nns.order(),
        "ordinary_inertia_order": ordinary.order(),
        "supersingular_inertia_order": supersingular.order(),
        "nonresidue": gl2.least_nonresidue(p),
    }
    failures = []
    if checks["split_cartan_order"] != (p - 1) ** 2:
        failures.append("split Cartan order")
    if checks["nonsplit_cartan_order"] != p * p - 1:
        failures.append("non-split Cartan order")
    if checks["split_normalizer_order"] != 2 * checks["split_cartan_order"]:
        failures.append("split normalizer index")
    if checks["nonsplit_normalizer_order"] != 2 * checks["nonsplit_cartan_order"]:
        failures.append("non-split normalizer index")
    if checks["ordinary_inertia_order"] != p - 1:
        failures.append("ordinary inertia order")
    if {gl2.det(m, p) for m in ordinary.elements()} != set(range(1, p)):
        failures.append("ordinary inertia determinants")
    if checks["supersingular_inertia_order"] != p + 1:
        failures.append("supersingular inertia order")
    if not supersingular.is_subgroup_of(Cns):
        failures.append("supersingular inertia outside the non-split Cartan")
    if p <= EXHAUSTIVE_CLAIM_LIMIT and not _outside_every_split_cartan(p, supersingular.generators[0]):
        failures.append("supersingular inertia conjugate into a split Cartan")
    for group in (Cs, Cns, Ns, Nns):
        if not group.is_closed():
            failures.append(f"{group.name} is not closed")
        if gl2.gl2_order(p) % group.order():
            failures.append(f"{group.name} order does not divide |GL2|")
    checks["failures"] = failures
    return checks


def verify_prime(p: int, trials: int = 10_000, seed: int = 0, pool: Optional[WorkerPool] = None) -> Dict:
    """
    Full verification report for one prime, as emitted by ``diag-gl2``.
    """
    report: Dict = {"p": p, "seed": seed}
    structure = structural_checks(p)
    report["structure"] = structure
    passed = not structure["failures"]
    if p >= 5:
        for kind in ("ordinary", "supersingular"):
            claim = plus_part_claim_report(p, kind, seed)
            report[f"{kind}_plus_part"] = {
                "exhaustive": claim.exhaustive,
                "checked": claim.checked,
                "counterexamples": claim.counterexamples,
                "passed": claim.passed,
            }
            passed = passed and claim.passed
    survey = classify_random_subgroups(p, trials, seed, pool)
    report["random_subgroups"] = {
        "trials": survey.trials,
        "tag_counts": survey.tag_counts,
        "dichotomy_enforced": survey.dichotomy_enforced,
        "dichotomy_checked": survey.dichotomy_checked,
        "dichotomy_passed": survey.dichotomy_passed,
        "cartan_checked": survey.cartan_checked,
        "counterexamples": survey.counterexamples,
    }
    passed = passed and survey.passed
    report["passed"] = passed
    return report
