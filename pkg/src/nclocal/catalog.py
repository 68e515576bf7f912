"""Built-in catalog of rational models with complex multiplication.

One integral model per class-number-one CM j-invariant (the thirteen
rational ones).  Every entry is re-verified at load time by recomputing
its j-invariant against the fixed table, so a corrupted catalog file
cannot slip through.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .elliptic import WeierstrassModel, j_invariant

__all__ = ["CatalogEntry", "load_catalog", "curve_by_label", "CM_J_INVARIANTS"]

# j-invariants of the class-number-one CM orders, keyed by discriminant
CM_J_INVARIANTS = {
    -3: 0,
    -4: 1728,
    -7: -3375,
    -8: 8000,
    -11: -32768,
    -12: 54000,
    -16: 287496,
    -19: -884736,
    -27: -12288000,
    -28: 16581375,
    -43: -884736000,
    -67: -147197952000,
    -163: -262537412640768000,
}

_BUILTIN = [
    {"label": "cm-3", "coefficients": [0, 0, 0, 0, 1], "cm_discriminant": -3, "notes": "y^2 = x^3 + 1, j = 0"},
    {"label": "cm-4", "coefficients": [0, 0, 0, -1, 0], "cm_discriminant": -4, "notes": "y^2 = x^3 - x, j = 1728"},
    {"label": "cm-7", "coefficients": [1, -1, 0, -2, -1], "cm_discriminant": -7, "notes": "conductor 49"},
    {"label": "cm-8", "coefficients": [0, 4, 0, 2, 0], "cm_discriminant": -8, "notes": "conductor 256"},
    {"label": "cm-11", "coefficients": [0, -1, 1, -7, 10], "cm_discriminant": -11, "notes": "conductor 121"},
    {"label": "cm-12", "coefficients": [0, 0, 0, -15, 22], "cm_discriminant": -12, "notes": "order of conductor 2 in Q(sqrt(-3))"},
    {"label": "cm-16", "coefficients": [0, 0, 0, -11, -14], "cm_discriminant": -16, "notes": "order of conductor 2 in Q(i)"},
    {"label": "cm-19", "coefficients": [0, 0, 1, -38, 90], "cm_discriminant": -19, "notes": "conductor 361"},
    {"label": "cm-27", "coefficients": [0, 0, 1, -30, 63], "cm_discriminant": -27, "notes": "order of conductor 3 in Q(sqrt(-3))"},
    {"label": "cm-28", "coefficients": [1, -1, 0, -37, -78], "cm_discriminant": -28, "notes": "order of conductor 2 in Q(sqrt(-7))"},
    {"label": "cm-43", "coefficients": [0, 0, 1, -860, 9707], "cm_discriminant": -43, "notes": "conductor 1849"},
    {"label": "cm-67", "coefficients": [0, 0, 1, -7370, 243528], "cm_discriminant": -67, "notes": "conductor 4489"},
    {"label": "cm-163", "coefficients": [0, 0, 1, -2174420, 1234136692], "cm_discriminant": -163, "notes": "conductor 26569"},
]


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    model: WeierstrassModel
    cm_discriminant: int
    notes: str
    j: Fraction

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "coefficients": self.model.coefficient_strings(),
            "cm_discriminant": self.cm_discriminant,
            "j": str(self.j),
            "notes": self.notes,
        }


def _entry_from_record(rec: dict) -> CatalogEntry:
    try:
        label = rec["label"]
        coeffs = rec["coefficients"]
        disc = int(rec["cm_discriminant"])
        notes = rec.get("notes", "")
    except (KeyError, TypeError) as err:
        raise ValueError(f"malformed catalog record {rec!r}: {err}") from None
    model = WeierstrassModel.over_q(*(Fraction(str(c)) for c in coeffs))
    j = j_invariant(model)
    expected = CM_J_INVARIANTS.get(disc)
    if expected is None:
        raise ValueError(f"{label}: {disc} is not a class-number-one CM discriminant")
    if j != expected:
        raise ValueError(f"{label}: recomputed j = {j}, expected {expected} for discriminant {disc}")
    return CatalogEntry(label=label, model=model, cm_discriminant=disc, notes=notes, j=j)


def load_catalog(path: Optional[str] = None) -> list:
    """The built-in catalog, or one read from a JSON file; every entry's
    j-invariant is recomputed and checked against the CM table."""
    if path is None:
        records = _BUILTIN
    else:
        with open(path, "r", encoding="utf-8") as fh:
            records = json.load(fh)
        if not isinstance(records, list):
            raise ValueError("catalog file must hold a JSON array")
    return [_entry_from_record(rec) for rec in records]


def curve_by_label(label: str, path: Optional[str] = None) -> CatalogEntry:
    for entry in load_catalog(path):
        if entry.label == label:
            return entry
    raise ValueError(f"no catalog entry labeled {label!r}")
