"""
Eigenform dataset documents over Q(sqrt 5) (label 2.2.5.1) shared by the tests.

Residues of w = (1 + sqrt 5) / 2: 11.11.0 -> 4, 11.11.1 -> 8, 19.19.0 -> 5,
19.19.1 -> 15. The character of eps1 is +1, -1, +1, -1 there; the character
of -1 is -1 at all four.
"""

import copy

FIELD_LABEL = "2.2.5.1"
UNIT_LEVEL = [[1, 0], [0, 1]]
ELEVEN_LEVEL = [[1, 8], [0, 11]]


def form(label, eigenvalues, hecke_poly=(1, 0), level=None, level_norm=1):
    return {
        "label": label,
        "level_hnf": copy.deepcopy(level or UNIT_LEVEL),
        "level_norm": level_norm,
        "weight": 2,
        "hecke_poly": list(hecke_poly),
        "eigenvalues": {key: list(value) for key, value in eigenvalues.items()},
    }


def document(*forms):
    return {"field": FIELD_LABEL, "forms": list(forms)}


def rational_mismatch_form():
    """a = 3 at both primes above 11: every twist breaks there with (11, 6, 135)."""
    return form("2.2.5.1-1.1-a", {"11.11.0": [3], "11.11.1": [3]})


def cm_form():
    """Vanishes exactly where eps1 is -1."""
    return form(
        "2.2.5.1-1.1-cm",
        {"11.11.0": [2], "11.11.1": [0], "19.19.0": [4], "19.19.1": [0]},
    )


def exhausted_form():
    """Only an eigenvalue at the inert prime above 2."""
    return form("2.2.5.1-1.1-x", {"2.4.0": [1]})


def nonrational_form():
    """Hecke field Q(sqrt 2), a = 1 + sqrt 2 at 11.11.0."""
    return form("2.2.5.1-1.1-s", {"11.11.0": [1, 1]}, hecke_poly=(1, 0, -2))


def nonrational_at_nineteen_form():
    """Rational above 11, a = 1 + sqrt 2 at 19.19.0, so S inside {2, 11} never hides it."""
    return form(
        "2.2.5.1-1.1-t",
        {"11.11.0": [2, 0], "11.11.1": [-2, 0], "19.19.0": [1, 1]},
        hecke_poly=(1, 0, -2),
    )


def steady_rational_form():
    return form(
        "2.2.5.1-1.1-r",
        {"11.11.0": [4], "11.11.1": [-4], "19.19.0": [2], "19.19.1": [-2]},
    )


def eleven_level_form():
    """Level 11.11.0, which divides M only when that prime is in S."""
    return form("2.2.5.1-11.1-a", {"19.19.0": [2]}, level=ELEVEN_LEVEL, level_norm=11)


# Norm(1 + sqrt 2 - t) for t = -6 .. 6
NONRATIONAL_FACTORS = [47, 34, 23, 14, 7, 2, -1, -2, -1, 2, 7, 14, 23]
# Norm(1 + sqrt 2 - t) for t = -8 .. 8
NINETEEN_FACTORS = [79, 62, 47, 34, 23, 14, 7, 2, -1, -2, -1, 2, 7, 14, 23, 34, 47]
