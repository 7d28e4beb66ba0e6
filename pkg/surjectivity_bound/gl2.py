"""
Finite-group laboratory for subgroups of GL2(F_p).

Matrices are 4-tuples ``(a, b, c, d)`` of residues mod p standing for
[[a, b], [c, d]] acting on column vectors. The quadratic extension F_{p^2}
is F_p(sqrt r) with r the least quadratic non-residue; its elements are
pairs ``(x, y)`` meaning x + y sqrt r.

Groups are classified by their behaviour on lines: common eigenlines over
F_p and F_{p^2} decide reducibility and Cartan containment, a pair of lines
permuted by every generator decides Cartan-normalizer containment, and a
breadth-first walk of the projective image finds elements of order p or
the size of an exceptional projective image.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Tuple

from sympy.ntheory import isprime, is_quad_residue, primefactors, primitive_root, sqrt_mod

from .exceptions import GroupError

logger = logging.getLogger(__name__)

Mat = Tuple[int, int, int, int]
Fp2 = Tuple[int, int]
Line = Tuple[Fp2, Fp2]

# Full materialization of a group in GL2(F_p) is allowed up to this prime.
ENUMERATION_LIMIT = 31
# Normalizers are found by searching all of GL2(F_p) up to this prime.
NORMALIZER_SEARCH_LIMIT = 13

CONTAINS_SL2 = "contains_sl2"
REDUCIBLE = "reducible"
SPLIT_CARTAN = "contained_in_split_cartan"
NONSPLIT_CARTAN = "contained_in_nonsplit_cartan"
NORMALIZER_SPLIT = "normalizer_split_not_cartan"
NORMALIZER_NONSPLIT = "normalizer_nonsplit_not_cartan"
PROJECTIVE_A4 = "projective_A4"
PROJECTIVE_S4 = "projective_S4"
PROJECTIVE_A5 = "projective_A5"

TAGS = (
    CONTAINS_SL2,
    REDUCIBLE,
    SPLIT_CARTAN,
    NONSPLIT_CARTAN,
    NORMALIZER_SPLIT,
    NORMALIZER_NONSPLIT,
    PROJECTIVE_A4,
    PROJECTIVE_S4,
    PROJECTIVE_A5,
)

EXCEPTIONAL_ORDERS = {12: PROJECTIVE_A4, 24: PROJECTIVE_S4, 60: PROJECTIVE_A5}


def check_prime(p: int, limit: Optional[int] = None) -> None:
    """
    Raises:
        GroupError: If p is not an odd prime, or exceeds ``limit``
    """
    if not isinstance(p, int) or p < 3 or not isprime(p):
        raise GroupError("p must be an odd prime (p >= 3 for Cartan constructions)", {"p": p})
    if limit is not None and p > limit:
        raise GroupError("p exceeds the enumeration limit", {"p": p, "limit": limit})


def gl2_order(p: int) -> int:
    return (p * p - 1) * (p * p - p)


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


def mat_mul(x: Mat, y: Mat, p: int) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)


def det(m: Mat, p: int) -> int:
    return (m[0] * m[3] - m[1] * m[2]) % p


def trace(m: Mat, p: int) -> int:
    return (m[0] + m[3]) % p


def mat_inv(m: Mat, p: int) -> Mat:
    a, b, c, d = m
    inverse = pow(det(m, p), -1, p)
    return ((d * inverse) % p, (-b * inverse) % p, (-c * inverse) % p, (a * inverse) % p)


def mat_pow(m: Mat, exponent: int, p: int) -> Mat:
    result: Mat = (1, 0, 0, 1)
    base = m
    while exponent:
        if exponent & 1:
            result = mat_mul(result, base, p)
        exponent >>= 1
        if exponent:
            base = mat_mul(base, base, p)
    return result


def is_scalar(m: Mat) -> bool:
    return m[1] == 0 and m[2] == 0 and m[0] == m[3]


def diag(a: int, d: int, p: int) -> Mat:
    return (a % p, 0, 0, d % p)


def conjugate(g: Mat, m: Mat, p: int) -> Mat:
    """g m g^-1."""
    return mat_mul(mat_mul(g, m, p), mat_inv(g, p), p)


def has_order_p(m: Mat, p: int) -> bool:
    """Non-scalar with a repeated eigenvalue, i.e. p divides the element order."""
    t = trace(m, p)
    return not is_scalar(m) and (t * t - 4 * det(m, p)) % p == 0


def projective_normal_form(m: Mat, p: int) -> Mat:
    """Representative of m modulo scalars with first nonzero entry 1."""
    lead = next(x for x in m if x)
    scale = pow(lead, -1, p)
    return tuple((x * scale) % p for x in m)


def projective_order(m: Mat, p: int) -> int:
    """Smallest k >= 1 with m^k scalar."""
    current = m
    k = 1
    while not is_scalar(current):
        current = mat_mul(current, m, p)
        k += 1
        if k > p * p:
            raise GroupError("projective order search did not terminate", {"matrix": m})
    return k


@dataclass(frozen=True)
class PrimeFieldMatrix:
    """
    Invertible 2x2 matrix over F_p.
    """

    p: int
    entries: Mat

    def __post_init__(self):
        reduced = tuple(int(x) % self.p for x in self.entries)
        if len(reduced) != 4:
            raise GroupError("a 2x2 matrix has four entries", {"entries": self.entries})
        object.__setattr__(self, "entries", reduced)
        if det(reduced, self.p) == 0:
            raise GroupError("matrix is not invertible", {"p": self.p, "entries": reduced})

    def __mul__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.p, mat_mul(self.entries, other.entries, self.p))

    def inverse(self) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.p, mat_inv(self.entries, self.p))

    @property
    def det(self) -> int:
        return det(self.entries, self.p)

    @property
    def trace(self) -> int:
        return trace(self.entries, self.p)


# ---------------------------------------------------------------------------
# F_{p^2}
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def least_nonresidue(p: int) -> int:
    check_prime(p)
    return next(r for r in range(2, p) if not is_quad_residue(r, p))


def fq_add(x: Fp2, y: Fp2, p: int) -> Fp2:
    return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)


def fq_sub(x: Fp2, y: Fp2, p: int) -> Fp2:
    return ((x[0] - y[0]) % p, (x[1] - y[1]) % p)


def fq_mul(x: Fp2, y: Fp2, p: int) -> Fp2:
    r = least_nonresidue(p)
    return ((x[0] * y[0] + r * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)


def fq_inv(x: Fp2, p: int) -> Fp2:
    r = least_nonresidue(p)
    norm = (x[0] * x[0] - r * x[1] * x[1]) % p
    if norm == 0:
        raise GroupError("zero has no inverse in F_{p^2}", {"p": p})
    inverse = pow(norm, -1, p)
    return ((x[0] * inverse) % p, (-x[1] * inverse) % p)


def fq_pow(x: Fp2, exponent: int, p: int) -> Fp2:
    result: Fp2 = (1, 0)
    base = x
    while exponent:
        if exponent & 1:
            result = fq_mul(result, base, p)
        exponent >>= 1
        if exponent:
            base = fq_mul(base, base, p)
    return result


def fq_sqrt_of_base(a: int, p: int) -> Fp2:
    """A square root in F_{p^2} of a residue of F_p."""
    a %= p
    if a == 0:
        return (0, 0)
    if is_quad_residue(a, p):
        return (sqrt_mod(a, p), 0)
    r = least_nonresidue(p)
    return (0, sqrt_mod((a * pow(r, -1, p)) % p, p))


def frobenius(x: Fp2, p: int) -> Fp2:
    return (x[0], (-x[1]) % p)


@lru_cache(maxsize=None)
def nonsplit_generator(p: int) -> Fp2:
    """First a + b sqrt r (lexicographic) generating F_{p^2}^x."""
    order = p * p - 1
    factors = primefactors(order)
    for a, b in product(range(p), range(1, p)):
        z = (a, b)
        if all(fq_pow(z, order // ell, p) != (1, 0) for ell in factors):
            return z
    raise GroupError("no generator of F_{p^2}^x found", {"p": p})


# ---------------------------------------------------------------------------
# Lines
# ---------------------------------------------------------------------------


def normalize_line(v: Line, p: int) -> Line:
    if v[0] != (0, 0):
        return ((1, 0), fq_mul(v[1], fq_inv(v[0], p), p))
    return ((0, 0), (1, 0))


def is_rational_line(v: Line) -> bool:
    return v[0][1] == 0 and v[1][1] == 0


def fixes_line(m: Mat, v: Line, p: int) -> bool:
    """Whether v is an eigenvector of m, via det[v, m v] = 0."""
    a, b, c, d = ((x, 0) for x in m)
    mv0 = fq_add(fq_mul(a, v[0], p), fq_mul(b, v[1], p), p)
    mv1 = fq_add(fq_mul(c, v[0], p), fq_mul(d, v[1], p), p)
    return fq_sub(fq_mul(v[0], mv1, p), fq_mul(v[1], mv0, p), p) == (0, 0)


def eigenlines(m: Mat, p: int) -> List[Line]:
    """
    Eigenlines of a non-scalar matrix over F_{p^2}, normalized.
    """
    if is_scalar(m):
        raise GroupError("every line is an eigenline of a scalar matrix", {"matrix": m})
    a, b, c, d = m
    t = trace(m, p)
    root = fq_sqrt_of_base(t * t - 4 * det(m, p), p)
    half = pow(2, -1, p)
    values = {
        fq_mul(fq_add((t, 0), root, p), (half, 0), p),
        fq_mul(fq_sub((t, 0), root, p), (half, 0), p),
    }
    lines = set()
    for value in values:
        if b:
            v = ((b, 0), fq_sub(value, (a, 0), p))
        elif c:
            v = (fq_sub(value, (d, 0), p), (c, 0))
        else:
            v = ((1, 0), (0, 0)) if value == (a, 0) else ((0, 0), (1, 0))
        lines.add(normalize_line(v, p))
    return sorted(lines, key=lambda line: (line[0] == (0, 0), line))


def rational_lines(p: int) -> List[Line]:
    return [((1, 0), (t, 0)) for t in range(p)] + [((0, 0), (1, 0))]


def line_to_json(v: Line) -> List[List[int]]:
    return [list(v[0]), list(v[1])]


# ---------------------------------------------------------------------------
# Groups
# ---------------------------------------------------------------------------


class MatrixGroup:
    """
    Subgroup of GL2(F_p) given by generators; the element set is
    materialized on first use and cached.
    """

    def __init__(
        self,
        p: int,
        generators: Iterable,
        name: Optional[str] = None,
        elements: Optional[FrozenSet[Mat]] = None,
    ):
        check_prime(p)
        self.p = p
        gens = []
        for g in generators:
            entries = g.entries if isinstance(g, PrimeFieldMatrix) else PrimeFieldMatrix(p, g).entries
            gens.append(entries)
        self.generators: Tuple[Mat, ...] = tuple(gens) or ((1, 0, 0, 1),)
        self.name = name
        self._elements = elements

    def elements(self) -> FrozenSet[Mat]:
        """
        Every element, by breadth-first closure under the generators.

        Raises:
            GroupError: If p exceeds the enumeration limit
        """
        if self._elements is None:
            check_prime(self.p, ENUMERATION_LIMIT)
            identity: Mat = (1, 0, 0, 1)
            seen = {identity}
            frontier = [identity]
            while frontier:
                next_frontier = []
                for x in frontier:
                    for g in self.generators:
                        y = mat_mul(x, g, self.p)
                        if y not in seen:
                            seen.add(y)
                            next_frontier.append(y)
                frontier = next_frontier
            self._elements = frozenset(seen)
            logger.debug(f"Materialized {self.name or 'group'} of order {len(seen)} at p={self.p}")
        return self._elements

    def order(self) -> int:
        return len(self.elements())

    def contains(self, m: Mat) -> bool:
        return m in self.elements()

    def is_subgroup_of(self, other: "MatrixGroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def is_closed(self) -> bool:
        """Closed under products and inverses (checked on the materialized set)."""
        elements = self.elements()
        return all(mat_inv(x, self.p) in elements for x in elements) and all(
            mat_mul(x, g, self.p) in elements for x in elements for g in self.generators
        )

    def __repr__(self) -> str:
        return f"MatrixGroup(p={self.p}, name={self.name!r}, generators={len(self.generators)})"


def full_gl2(p: int) -> MatrixGroup:
    g = primitive_root(p)
    return MatrixGroup(p, [(1, 1, 0, 1), (1, 0, 1, 1), diag(g, 1, p)], name="GL2")


def sl2(p: int) -> MatrixGroup:
    return MatrixGroup(p, [(1, 1, 0, 1), (1, 0, 1, 1)], name="SL2")


def split_cartan(p: int) -> MatrixGroup:
    """Diagonal matrices, order (p-1)^2."""
    check_prime(p)
    g = primitive_root(p)
    return MatrixGroup(p, [diag(g, 1, p), diag(1, g, p)], name="split_cartan")


def nonsplit_cartan_generator(p: int) -> Mat:
    a, b = nonsplit_generator(p)
    r = least_nonresidue(p)
    return (a, (b * r) % p, b, a)


def nonsplit_cartan(p: int) -> MatrixGroup:
    """Image of F_{p^2}^x acting on the basis {1, sqrt r}, order p^2 - 1."""
    check_prime(p)
    return MatrixGroup(p, [nonsplit_cartan_generator(p)], name="nonsplit_cartan")


def _normalizer_by_search(C: MatrixGroup) -> MatrixGroup:
    p = C.p
    members = C.elements()
    found = []
    for entries in product(range(p), repeat=4):
        if det(entries, p) == 0:
            continue
        if all(conjugate(entries, x, p) in members for x in C.generators):
            found.append(entries)
    outside = next(g for g in sorted(found) if g not in members)
    return MatrixGroup(p, C.generators + (outside,), name=f"normalizer_{C.name}", elements=frozenset(found))


def cartan_normalizer(C: MatrixGroup) -> MatrixGroup:
    """
    Normalizer of a split or non-split Cartan subgroup built by this module.

    Found by searching GL2(F_p) for p up to ``NORMALIZER_SEARCH_LIMIT``;
    beyond that the Weyl element (split) or the Frobenius diag(1, -1)
    (non-split) is adjoined.
    """
    if C.name not in ("split_cartan", "nonsplit_cartan"):
        raise GroupError("cartan_normalizer expects a Cartan subgroup", {"name": C.name})
    if C.p <= NORMALIZER_SEARCH_LIMIT:
        return _normalizer_by_search(C)
    extra = (0, 1, 1, 0) if C.name == "split_cartan" else diag(1, -1, C.p)
    return MatrixGroup(C.p, C.generators + (extra,), name=f"normalizer_{C.name}")


def plus_part(G: MatrixGroup) -> MatrixGroup:
    """
    Elements with square determinant, by Schreier generators over {1, t}.
    """
    p = G.p

    def square(m: Mat) -> bool:
        return is_quad_residue(det(m, p), p)

    t = next((g for g in G.generators if not square(g)), None)
    if t is None:
        return MatrixGroup(p, G.generators, name=f"{G.name}+" if G.name else None, elements=G._elements)
    t_inv = mat_inv(t, p)
    gens = []
    for g in G.generators:
        if square(g):
            gens.append(g)
            gens.append(conjugate(t, g, p))
        else:
            gens.append(mat_mul(g, t_inv, p))
            gens.append(mat_mul(t, g, p))
    gens = sorted(set(gens))
    return MatrixGroup(p, gens, name=f"{G.name}+" if G.name else None)


def inertia_shape_subgroups(p: int, kind: str) -> MatrixGroup:
    """
    Ordinary shape {diag(t, 1)} of order p - 1, or the supersingular shape,
    the order p + 1 subgroup of the non-split Cartan.
    """
    check_prime(p)
    if kind == "ordinary":
        return MatrixGroup(p, [diag(primitive_root(p), 1, p)], name="inertia_ordinary")
    if kind == "supersingular":
        zeta = nonsplit_cartan_generator(p)
        return MatrixGroup(p, [mat_pow(zeta, p - 1, p)], name="inertia_supersingular")
    raise GroupError("kind must be 'ordinary' or 'supersingular'", {"kind": kind})


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ImageClassification:
    tag: str
    witness: Dict = field(default_factory=dict)


def common_rational_lines(G: MatrixGroup) -> List[Line]:
    return [v for v in rational_lines(G.p) if all(fixes_line(g, v, G.p) for g in G.generators)]


def is_absolutely_irreducible(G: MatrixGroup) -> Tuple[bool, Optional[Line]]:
    """
    Whether the generators share no eigenvector over F_{p^2}.

    Returns:
        ``(True, None)`` or ``(False, common eigenline)``
    """
    p = G.p
    moving = [g for g in G.generators if not is_scalar(g)]
    if not moving:
        return False, ((1, 0), (0, 0))
    for v in eigenlines(moving[0], p):
        if all(fixes_line(g, v, p) for g in moving[1:]):
            return False, v
    return True, None


def _permutes_pair(m: Mat, u: Line, v: Line, p: int) -> bool:
    if fixes_line(m, u, p) and fixes_line(m, v, p):
        return True
    mu = _image(m, u, p)
    mv = _image(m, v, p)
    return mu == v and mv == u


def _image(m: Mat, v: Line, p: int) -> Line:
    a, b, c, d = ((x, 0) for x in m)
    w = (
        fq_add(fq_mul(a, v[0], p), fq_mul(b, v[1], p), p),
        fq_add(fq_mul(c, v[0], p), fq_mul(d, v[1], p), p),
    )
    return normalize_line(w, p)


def cartan_normalizer_pair(G: MatrixGroup) -> Optional[Tuple[Line, Line]]:
    """
    A pair of distinct lines permuted by every generator, if one exists.

    Candidates are the eigenline pairs of g, g^2 and g h for generators g, h.
    """
    p = G.p
    gens = G.generators
    candidates = list(gens) + [mat_mul(g, g, p) for g in gens] + [mat_mul(g, h, p) for g in gens for h in gens]
    seen = set()
    for m in candidates:
        if is_scalar(m):
            continue
        lines = eigenlines(m, p)
        if len(lines) != 2:
            continue
        u, v = lines
        if (u, v) in seen:
            continue
        seen.add((u, v))
        if all(_permutes_pair(g, u, v, p) for g in gens):
            return u, v
    return None


def projective_image(
    G: MatrixGroup, stop: Optional[Callable[[Mat], bool]] = None
) -> Tuple[FrozenSet[Mat], Optional[Mat]]:
    """
    Elements of the image in PGL2(F_p), in projective normal form.

    Args:
        G: Group
        stop: Optional predicate; the walk ends at the first element satisfying it

    Returns:
        ``(elements seen, stopping element or None)``

    Raises:
        GroupError: If the whole image is requested above the enumeration limit
    """
    p = G.p
    if stop is None:
        check_prime(p, ENUMERATION_LIMIT)
    gens = [projective_normal_form(g, p) for g in G.generators]
    identity: Mat = (1, 0, 0, 1)
    seen = {identity}
    frontier = [identity]
    for g in gens:
        if stop is not None and stop(g):
            return frozenset(seen), g
    while frontier:
        next_frontier = []
        for x in frontier:
            for g in gens:
                y = projective_normal_form(mat_mul(x, g, p), p)
                if y in seen:
                    continue
                if stop is not None and stop(y):
                    seen.add(y)
                    return frozenset(seen), y
                seen.add(y)
                next_frontier.append(y)
        frontier = next_frontier
    return frozenset(seen), None


def has_element_of_projective_order(G: MatrixGroup, n: int) -> bool:
    """Whether some element of G has order exactly n in PGL2(F_p)."""
    if n == 1:
        return True
    elements, _ = projective_image(G)
    return any(projective_order(m, G.p) == n for m in elements)


def projective_image_type(G: MatrixGroup) -> ImageClassification:
    """
    Classify G: reducible, inside a Cartan, inside a Cartan normalizer,
    containing SL2, or with projective image A4, S4 or A5.
    """
    p = G.p
    irreducible, line = is_absolutely_irreducible(G)
    if not irreducible:
        rational = common_rational_lines(G)
        if len(rational) >= 2:
            u, v = rational[0], rational[1]
            conjugator = [u[0][0], v[0][0], u[1][0], v[1][0]]
            return ImageClassification(SPLIT_CARTAN, {"lines": [line_to_json(u), line_to_json(v)], "conjugator": conjugator})
        if len(rational) == 1:
            return ImageClassification(REDUCIBLE, {"line": line_to_json(rational[0])})
        conjugate_line = tuple(frobenius(x, p) for x in line)
        return ImageClassification(
            NONSPLIT_CARTAN,
            {"lines": [line_to_json(line), line_to_json(conjugate_line)], "nonresidue": least_nonresidue(p)},
        )

    pair = cartan_normalizer_pair(G)
    if pair is not None:
        u, v = pair
        tag = NORMALIZER_SPLIT if is_rational_line(u) and is_rational_line(v) else NORMALIZER_NONSPLIT
        return ImageClassification(tag, {"lines": [line_to_json(u), line_to_json(v)]})

    elements, unipotent = projective_image(G, stop=lambda m: has_order_p(m, p))
    if unipotent is not None:
        return ImageClassification(CONTAINS_SL2, {"order_p_element": list(unipotent)})
    size = len(elements)
    if size in EXCEPTIONAL_ORDERS:
        return ImageClassification(EXCEPTIONAL_ORDERS[size], {"projective_order": size})
    raise GroupError("group escaped the classification", {"p": p, "projective_order": size})
