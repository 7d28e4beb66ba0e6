"""
Report mapper that turns pipeline results into JSON-safe documents and
human-readable text. Integers are written as decimal strings.
"""

import json
import logging
from dataclasses import fields, is_dataclass
from fractions import Fraction
from typing import Any, Dict, List

from .elimination import BoundReport
from .irreducibility import SignPattern
from .numfield import AlgebraicInteger, IntegralIdeal


class ReportMapper:
    """
    Maps BoundReport and diagnostic results to serializable form.
    """

    def __init__(self):
        """
        Initialize the report mapper.
        """
        self.logger = logging.getLogger(__name__)

    def map_report(self, report: BoundReport) -> Dict[str, Any]:
        """
        Map a BoundReport to a JSON-safe dictionary.

        Args:
            report: Assembled report

        Returns:
            Dictionary whose integers are decimal strings
        """
        irr = report.irreducibility
        level = report.level
        document = {
            "status": "CONDITIONAL" if report.conditional else "UNCONDITIONAL",
            "C_K_S": report.C,
            "field": report.field_summary,
            "S": list(report.S),
            "irreducibility": {
                "B": irr.B,
                "pattern_table": [{"pattern": str(s), "A_s": a} for s, a in irr.pattern_table],
                "merel_momose": irr.merel_momose,
                "excluded_primes": list(irr.excluded_primes),
                "threshold": irr.threshold,
            },
            "level": {
                "M": level.M,
                "M_norm": level.M_norm,
                "character_bound": level.character_bound,
                "character_bound_norm": level.character_bound_norm,
                "exponents": [
                    {"prime": key, "level_exponent": m, "character_exponent": c} for key, m, c in level.exponents
                ],
            },
            "characters": list(report.characters),
            "pruned_characters": list(report.pruned_characters),
            "dataset": report.dataset,
            "verdicts": [self._map_row(v) for v in report.verdicts],
            "surviving_forms": [{"label": label, "character": psi} for label, psi in report.surviving],
            "missing_data": list(report.missing_data),
            "notices": list(report.notices),
        }
        return self._map_value(document)

    def map_results(self, results: List[Any]) -> List[Any]:
        return [self._map_value(r) for r in results]

    def _map_row(self, row: Any) -> Dict[str, Any]:
        """
        Map a dataclass instance to a dictionary of mapped fields.
        """
        return {f.name: self._map_value(getattr(row, f.name)) for f in fields(row)}

    def _map_value(self, value: Any) -> Any:
        """
        Map a single value to its JSON-safe form.
        """
        if value is None or isinstance(value, (bool, str)):
            return value
        if isinstance(value, int):
            return str(value)
        if isinstance(value, Fraction):
            return str(value)
        if isinstance(value, IntegralIdeal):
            return {"hnf": self._map_value(value.hnf), "norm": str(value.norm)}
        if isinstance(value, AlgebraicInteger):
            return self._map_value(value.coords)
        if isinstance(value, SignPattern):
            return str(value)
        if is_dataclass(value):
            return self._map_row(value)
        if isinstance(value, dict):
            return {str(k): self._map_value(v) for k, v in value.items()}
        if isinstance(value, (list, tuple, set, frozenset)):
            items = sorted(value) if isinstance(value, (set, frozenset)) else value
            return [self._map_value(v) for v in items]
        self.logger.debug(f"Mapping unrecognised value of type {type(value).__name__} as text")
        return str(value)

    def to_json(self, document: Any) -> str:
        return json.dumps(document, sort_keys=True, indent=2) + "\n"

    def render_text(self, document: Dict[str, Any]) -> str:
        """
        Human-readable rendering of a mapped report.
        """
        irr = document["irreducibility"]
        level = document["level"]
        field = document["field"]
        lines = [
            f"C_K,S = {document['C_K_S']}  [{document['status']}]",
            "",
            f"Field {field['label']}: degree {field['degree']}, disc {field['disc']}, "
            f"h = {field['class_number']}, h+ = {field['narrow_class_number']}",
            f"  units: {', '.join('(' + ','.join(u) + ')' for u in field['units'])}  norms: {', '.join(field['unit_norms'])}",
            f"S = {{{', '.join(document['S'])}}}",
            "",
            "Irreducibility",
            f"  B = {irr['B']}",
        ]
        for row in irr["pattern_table"]:
            lines.append(f"  A_{row['pattern']} = {row['A_s']}")
        lines += [
            f"  1 + 3^(6dh) = {irr['merel_momose']}",
            f"  excluded primes: {', '.join(irr['excluded_primes'])}",
            f"  threshold = {irr['threshold']}",
            "",
            "Levels",
            f"  N(M) = {level['M_norm']}",
            f"  N(character bound) = {level['character_bound_norm']}",
        ]
        for row in level["exponents"]:
            lines.append(f"  {row['prime']}: level exponent {row['level_exponent']}, character exponent {row['character_exponent']}")
        lines += ["", f"Characters ({len(document['characters'])}): {', '.join(document['characters'])}"]
        for row in document["pruned_characters"]:
            lines.append(f"  pruned {row['character']}: odd valuation {row['valuation']} at {row['prime']}")
        lines += ["", f"Verdicts ({len(document['verdicts'])})"]
        for verdict in document["verdicts"]:
            extra = f" by {verdict['character']} up to norm {verdict['coverage']}" if verdict["character"] else ""
            lines.append(f"  {verdict['label']}: {verdict['outcome']}{extra}, contribution {verdict['contribution']}")
            for warning in verdict["warnings"]:
                lines.append(f"    warning: {warning}")
        if document["surviving_forms"]:
            lines += ["", "Surviving forms"]
            lines += [f"  {row['label']} (CM by {row['character']})" for row in document["surviving_forms"]]
        if document["missing_data"]:
            lines += ["", "Missing data"]
            lines += [f"  {row}" for row in document["missing_data"]]
        lines += ["", "Notices"]
        lines += [f"  {row}" for row in document["notices"]]
        return "\n".join(lines) + "\n"
