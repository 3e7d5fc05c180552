"""Serializable form of an analysis result, with JSON and tabular text renderings."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from .solver import AbsVal, Solution, parse_value, value_key
from .terms import Label, parse_label

__all__ = ["SolutionDocument", "label_order"]


def label_order(key: Label | str):
    """Base labels numerically with sublabels after their base; variables last."""
    if isinstance(key, Label):
        return (0, key.base, key.sub, "")
    return (1, 0, "", key)


def _parse_key(text: str) -> Label | str:
    return parse_label(text) if text[:1].isdigit() else text


@dataclass
class SolutionDocument:
    term: str
    gamma: dict[str, list[str]]
    phi: list[int]
    meta: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_solution(cls, term: str, sol: Solution, calculus: str,
                      keys=None) -> "SolutionDocument":
        """Nonempty entries of ``sol`` (or exactly ``keys`` if given, empty ones included)."""
        chosen = sorted(keys if keys is not None else sol.labels(), key=label_order)
        gamma = {
            str(k): [str(v) for v in sorted(sol[k], key=value_key)]
            for k in chosen
        }
        return cls(term, gamma, sorted(sol.phi),
                   {"calculus": calculus, "iterations": sol.iterations})

    def to_json(self) -> str:
        return json.dumps(
            {"term": self.term, "gamma": self.gamma, "phi": self.phi, "meta": self.meta},
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "SolutionDocument":
        data = json.loads(text)
        return cls(data["term"], {k: list(v) for k, v in data["gamma"].items()},
                   list(data["phi"]), dict(data.get("meta", {})))

    def gamma_map(self) -> dict[Label | str, frozenset[AbsVal]]:
        return {_parse_key(k): frozenset(map(parse_value, vs)) for k, vs in self.gamma.items()}

    def render_text(self, columns: int = 3) -> str:
        """Entries laid out in aligned columns, then activations, then the term."""
        cells = [f"G({k}) = {{ {', '.join(vs)} }}" for k, vs in self.gamma.items()]
        cells += [f"phi({n}) = true" for n in self.phi]
        width = max((len(c) for c in cells), default=0)
        rows = []
        for i in range(0, len(cells), columns):
            row = cells[i:i + columns]
            rows.append("   ".join(c.ljust(width) for c in row).rstrip())
        rows.append("")
        rows.append(f"G, phi |= {self.term}")
        return "\n".join(rows)


def document_matches(doc: SolutionDocument, table: Mapping[str, list[str]]) -> list[str]:
    """Entries of ``table`` where ``doc`` disagrees (as sets)."""
    out = []
    got = doc.gamma_map()
    for k, vs in table.items():
        want = frozenset(map(parse_value, vs))
        have = got.get(_parse_key(k), frozenset())
        if want != have:
            out.append(f"{k}: expected {sorted(vs)}, got {sorted(map(str, have))}")
    return out


__all__.append("document_matches")
