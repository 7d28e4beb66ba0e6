"""
Run configuration: command-line flags merged over an optional JSON file,
and translation of S specifications into verified prime ideals.
"""

import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from sympy.ntheory import isprime, primefactors

from . import numfield
from .exceptions import ConfigError, SurjectivityBoundError
from .numfield import IntegralIdeal, NumberField

FORMS_URL_ENV = "SURJECTIVITY_FORMS_URL"

DEFAULT_GL2_PRIMES = (3, 5, 7, 11, 13)
DEFAULT_GL2_TRIALS = 10_000
DEFAULT_CACHE_DIR = ".surjectivity_cache"
DEFAULT_OUT_DIR = "."

# argparse destination -> config file key
FILE_KEYS = {
    "quadratic": "quadratic",
    "field_path": "field",
    "s_specs": "S",
    "forms": "forms",
    "cache_dir": "cache",
    "out_dir": "out",
    "jobs": "jobs",
    "seed": "seed",
    "gl2_primes": "gl2_primes",
    "gl2_trials": "gl2_trials",
}

PrimeSpec = Union[str, List[List[int]]]


@dataclass(frozen=True)
class RunConfig:
    quadratic: Optional[int] = None
    field_path: Optional[str] = None
    s_specs: Tuple[Any, ...] = ()
    forms: str = "none"
    cache_dir: str = DEFAULT_CACHE_DIR
    out_dir: str = DEFAULT_OUT_DIR
    jobs: int = 1
    seed: int = 0
    gl2_primes: Tuple[int, ...] = DEFAULT_GL2_PRIMES
    gl2_trials: int = DEFAULT_GL2_TRIALS
    forms_url: Optional[str] = None

    @classmethod
    def from_args(cls, args: Any, environ: Optional[Dict[str, str]] = None) -> "RunConfig":
        """
        Build a RunConfig from parsed arguments, merged over ``args.config``.

        Args:
            args: argparse namespace; unset flags are None
            environ: Environment mapping (defaults to os.environ)

        Returns:
            Validated RunConfig
        """
        environ = os.environ if environ is None else environ
        values: Dict[str, Any] = {}
        config_path = getattr(args, "config", None)
        if config_path:
            values.update(load_config_file(config_path))
        for dest in FILE_KEYS:
            value = getattr(args, dest, None)
            if value is not None:
                values[dest] = value
        if isinstance(values.get("s_specs"), str):
            values["s_specs"] = parse_s_flag(values["s_specs"])
        if isinstance(values.get("gl2_primes"), str):
            values["gl2_primes"] = parse_int_list(values["gl2_primes"], "gl2_primes")
        for key in ("s_specs", "gl2_primes"):
            if key in values:
                values[key] = tuple(values[key])
        values["forms_url"] = environ.get(FORMS_URL_ENV)
        config = cls(**values)
        config.validate()
        return config

    def validate(self) -> None:
        """
        Raises:
            ConfigError: On the first invalid field
        """
        if self.quadratic is not None and self.field_path is not None:
            raise ConfigError("give either a quadratic m or a field description, not both")
        if self.quadratic is not None and not isinstance(self.quadratic, int):
            raise ConfigError("quadratic must be an integer", {"quadratic": self.quadratic})
        if not isinstance(self.jobs, int) or self.jobs < 1:
            raise ConfigError("jobs must be a positive integer", {"jobs": self.jobs})
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer", {"seed": self.seed})
        if not isinstance(self.gl2_trials, int) or self.gl2_trials < 0:
            raise ConfigError("gl2_trials must be a non-negative integer", {"gl2_trials": self.gl2_trials})
        if any(not isinstance(p, int) for p in self.gl2_primes):
            raise ConfigError("gl2_primes must be integers", {"gl2_primes": self.gl2_primes})
        if self.forms == "remote" and not self.forms_url:
            raise ConfigError(f"--forms remote needs the {FORMS_URL_ENV} environment variable")
        seen = set()
        for spec in self.s_specs:
            marker = json.dumps(spec)
            if marker in seen:
                raise ConfigError("duplicate entry in S", {"spec": spec})
            seen.add(marker)

    @property
    def forms_source(self) -> Tuple[str, Optional[str]]:
        """
        ``("none", None)``, ``("remote", base url)``, ``("url", base url)`` or ``("path", path)``.
        """
        if self.forms in (None, "", "none"):
            return "none", None
        if self.forms == "remote":
            return "remote", self.forms_url
        if self.forms.startswith(("http://", "https://")):
            return "url", self.forms
        return "path", self.forms


def load_config_file(path: str) -> Dict[str, Any]:
    """
    Read a JSON run-config file into RunConfig field names.
    """
    try:
        with open(Path(path), "r", encoding="utf-8") as fh:
            document = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read run config: {str(e)}", {"path": path}) from e
    if not isinstance(document, dict):
        raise ConfigError("run config must be a JSON object", {"path": path})
    reverse = {file_key: dest for dest, file_key in FILE_KEYS.items()}
    unknown = sorted(set(document) - set(reverse))
    if unknown:
        raise ConfigError("unknown run config keys", {"keys": unknown})
    return {reverse[key]: value for key, value in document.items()}


def parse_s_flag(text: str) -> List[str]:
    """Split ``--S 2,11.0`` into specs; an empty string is the empty set."""
    return [part.strip() for part in text.split(",") if part.strip()]


def parse_int_list(text: str, name: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"{name} must be a comma-separated list of integers", {name: text}) from e


class PrimeSpecTranslator:
    """
    Translates S specifications into prime ideals of a field.
    """

    def __init__(self, K: NumberField):
        """
        Initialize the translator.

        Args:
            K: Field whose primes are named
        """
        self.K = K
        self.logger = logging.getLogger(__name__)

    def translate(self, specs: Sequence[PrimeSpec]) -> List[IntegralIdeal]:
        """
        Translate every spec and reject duplicates.

        Args:
            specs: ``"q"``, ``"q.i"`` or an explicit HNF matrix

        Returns:
            Prime ideals ordered by (norm, residue characteristic, index)
        """
        try:
            primes: List[IntegralIdeal] = []
            for spec in specs:
                primes.extend(self._convert_spec(spec))
            keys = [p.key for p in primes]
            if len(set(keys)) != len(keys):
                raise ConfigError("S contains a prime twice", {"S": keys})
            primes.sort(key=lambda p: p.sort_key)
            self.logger.debug(f"Translated S specs {list(specs)} -> {[p.key for p in primes]}")
            return primes

        except SurjectivityBoundError as e:
            self.logger.error(f"Error translating S: {e.message}")
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(e.message, e.diagnostic) from e

    def _convert_spec(self, spec: PrimeSpec) -> List[IntegralIdeal]:
        if isinstance(spec, list):
            return [self._convert_hnf(spec)]
        if not isinstance(spec, str):
            raise ConfigError("S entries must be strings or HNF matrices", {"spec": spec})
        parts = spec.split(".")
        if len(parts) not in (1, 2) or not all(part.isdigit() for part in parts):
            raise ConfigError("malformed S entry (expected q or q.i)", {"spec": spec})
        q = int(parts[0])
        if not isprime(q):
            raise ConfigError("S entry does not name a rational prime", {"spec": spec})
        above = list(numfield.factor_rational_prime(self.K, q))
        if not above:
            raise ConfigError("no prime of the field above q is known", {"spec": spec})
        if len(parts) == 1:
            return above
        index = int(parts[1])
        if index >= len(above):
            raise ConfigError("prime index out of range", {"spec": spec, "primes_above": len(above)})
        return [above[index]]

    def _convert_hnf(self, matrix: List[List[int]]) -> IntegralIdeal:
        hnf = tuple(tuple(int(x) for x in row) for row in matrix)
        if len(hnf) != self.K.degree:
            raise ConfigError("HNF has the wrong dimension", {"hnf": matrix})
        norm = 1
        for i, row in enumerate(hnf):
            norm *= row[i]
        factors = primefactors(norm) if norm > 1 else []
        if len(factors) != 1:
            raise ConfigError("HNF is not a prime ideal", {"hnf": matrix})
        for prime in numfield.factor_rational_prime(self.K, int(factors[0])):
            if prime.hnf == hnf:
                return prime
        raise ConfigError("HNF does not match any prime of the field", {"hnf": matrix})
