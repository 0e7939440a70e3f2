"""Structured diffs between derived quantities and printed formulas."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Union

from .laurent import LaurentPoly

EXACT = "exact-match"
SIGN_FLIP = "sign-flip"
STRUCTURAL = "structural"
SEVERITIES = (EXACT, SIGN_FLIP, STRUCTURAL)

Value = Union[Fraction, LaurentPoly]


def render(x: Value | None, var: str = "x") -> Optional[str]:
    if x is None:
        return None
    if isinstance(x, LaurentPoly):
        return x.to_string(var)
    return str(x)


def classify(derived: Value, printed: Value) -> str:
    """exact-match, sign-flip (every differing term is a pure sign change) or structural."""
    if not isinstance(derived, LaurentPoly):
        derived = LaurentPoly.constant(derived)
    if not isinstance(printed, LaurentPoly):
        printed = LaurentPoly.constant(printed)
    if derived == printed:
        return EXACT
    keys = set(derived.coefficients) | set(printed.coefficients)
    for k in keys:
        a, b = derived[k], printed[k]
        if a != b and a != -b:
            return STRUCTURAL
    return SIGN_FLIP


@dataclass(frozen=True)
class DiscrepancyEntry:
    table: str
    entry: str
    n: int
    p_or_t: Optional[str]
    derived: Optional[str]
    printed: Optional[str]
    delta: Optional[str]
    severity: str

    def key(self):
        return (self.table, self.entry, self.n, self.p_or_t or "")


def make_entry(table: str, entry: str, n: int, derived: Value, printed: Value,
               p_or_t: Optional[str] = None, var: str = "x") -> DiscrepancyEntry:
    if isinstance(derived, LaurentPoly) or isinstance(printed, LaurentPoly):
        d = derived if isinstance(derived, LaurentPoly) else LaurentPoly.constant(derived)
        pr = printed if isinstance(printed, LaurentPoly) else LaurentPoly.constant(printed)
        delta: Value = d - pr
    else:
        delta = Fraction(derived) - Fraction(printed)
    return DiscrepancyEntry(
        table=table,
        entry=entry,
        n=n,
        p_or_t=p_or_t,
        derived=render(derived, var),
        printed=render(printed, var),
        delta=render(delta, var),
        severity=classify(derived, printed),
    )


@dataclass(frozen=True)
class Certification:
    table: str
    entry: str
    samples: int
    required: int
    verdict: str  # certified-equal | equal-at-samples | discrepant


@dataclass
class DiscrepancyReport:
    entries: List[DiscrepancyEntry] = field(default_factory=list)
    certifications: List[Certification] = field(default_factory=list)
    notes: Dict[str, object] = field(default_factory=dict)

    def add(self, e: DiscrepancyEntry) -> None:
        self.entries.append(e)

    def extend(self, es: Iterable[DiscrepancyEntry]) -> None:
        self.entries.extend(es)

    def merge(self, other: "DiscrepancyReport") -> "DiscrepancyReport":
        out = DiscrepancyReport(list(self.entries) + list(other.entries),
                                list(self.certifications) + list(other.certifications),
                                {**self.notes, **other.notes})
        out.normalize()
        return out

    def normalize(self) -> None:
        """Sort into a canonical order so reports are byte-stable."""
        self.entries.sort(key=lambda e: (e.table, e.entry, e.n, e.p_or_t or ""))
        self.certifications.sort(key=lambda c: (c.table, c.entry))

    def select(self, table: Optional[str] = None, entry: Optional[str] = None) -> List[DiscrepancyEntry]:
        return [e for e in self.entries
                if (table is None or e.table == table) and (entry is None or e.entry == entry)]

    def mismatches(self) -> List[DiscrepancyEntry]:
        return [e for e in self.entries if e.severity != EXACT]

    def counts(self) -> Dict[str, int]:
        out = {s: 0 for s in SEVERITIES}
        for e in self.entries:
            out[e.severity] += 1
        return out

    @property
    def all_exact(self) -> bool:
        return not self.mismatches()

    def to_dict(self) -> dict:
        self.normalize()
        return {
            "entries": [asdict(e) for e in self.entries],
            "certifications": [asdict(c) for c in self.certifications],
            "counts": self.counts(),
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, default=str)


def certify(table: str, entry: str, matches: List[bool], required: int) -> Certification:
    if not all(matches):
        verdict = "discrepant"
    elif len(matches) >= required:
        verdict = "certified-equal"
    else:
        verdict = "equal-at-samples"
    return Certification(table, entry, len(matches), required, verdict)
