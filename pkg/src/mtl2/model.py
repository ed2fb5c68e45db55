"""Finite structure descriptions over the canonical flow pair (Q+, q -> q+1).

A model assigns each propositional letter a finite union of rectangular
regions (external interval x internal interval set), an assignment of
external variables to Q+, and a single internal assignment shared by all
external points.  Unassigned variables default to 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .intervals import (
    Interval,
    IntervalSet,
    format_interval,
    format_interval_set,
    format_rational,
    parse_interval,
    parse_interval_set,
    parse_rational,
)


@dataclass(frozen=True)
class Region:
    letter: int  # index of the propositional letter
    ext: Interval
    int_set: IntervalSet


@dataclass(frozen=True)
class ModelDescription:
    regions: tuple = ()
    ext_assign: tuple = ()  # sorted ((name, Fraction), ...)
    int_assign: tuple = ()

    @staticmethod
    def build(regions=(), ext_assign=None, int_assign=None) -> "ModelDescription":
        ea = tuple(sorted((ext_assign or {}).items()))
        ia = tuple(sorted((int_assign or {}).items()))
        return ModelDescription(tuple(regions), ea, ia)

    def ext_value(self, name: str) -> Fraction:
        for k, v in self.ext_assign:
            if k == name:
                return v
        return Fraction(0)

    def int_value(self, name: str) -> Fraction:
        for k, v in self.int_assign:
            if k == name:
                return v
        return Fraction(0)

    def letters(self) -> list[int]:
        return sorted({r.letter for r in self.regions})

    def ext_boundaries(self) -> list[Fraction]:
        out = set()
        for r in self.regions:
            out.add(r.ext.lower)
            if r.ext.upper is not None:
                out.add(r.ext.upper)
        return sorted(out)


# ---------------------------------------------------------------------------
# file format: [[region]] tables and one [assign] table


def dumps_model(m: ModelDescription) -> str:
    lines = []
    for r in m.regions:
        lines.append("[[region]]")
        lines.append(f'letter = "p{r.letter}"')
        lines.append(f'ext = "{format_interval(r.ext)}"')
        lines.append(f'int = "{format_interval_set(r.int_set)}"')
        lines.append("")
    assigns = list(m.ext_assign) + list(m.int_assign)
    if assigns:
        lines.append("[assign]")
        for name, value in assigns:
            lines.append(f'{name} = "{format_rational(value)}"')
        lines.append("")
    return "\n".join(lines)


class ModelFormatError(ValueError):
    pass


def loads_model(text: str) -> ModelDescription:
    regions = []
    ext_assign = {}
    int_assign = {}
    section = None
    current = None

    def finish_region():
        if current is None:
            return
        missing = {"letter", "ext", "int"} - current.keys()
        if missing:
            raise ModelFormatError(f"region missing keys {sorted(missing)}")
        letter = current["letter"]
        if not (letter.startswith("p") and letter[1:].isdigit()):
            raise ModelFormatError(f"bad letter {letter!r}")
        regions.append(
            Region(int(letter[1:]), parse_interval(current["ext"]), parse_interval_set(current["int"]))
        )

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "[[region]]":
            finish_region()
            current = {}
            section = "region"
            continue
        if line == "[assign]":
            finish_region()
            current = None
            section = "assign"
            continue
        if "=" not in line:
            raise ModelFormatError(f"bad line {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not (value.startswith('"') and value.endswith('"')):
            raise ModelFormatError(f"value must be quoted: {line!r}")
        value = value[1:-1]
        if section == "region":
            current[key] = value
        elif section == "assign":
            if key[0] == "X":
                ext_assign[key] = parse_rational(value)
            elif key[0] == "x":
                int_assign[key] = parse_rational(value)
            else:
                raise ModelFormatError(f"bad assignment target {key!r}")
        else:
            raise ModelFormatError(f"line outside any section: {line!r}")
    finish_region()
    return ModelDescription.build(regions, ext_assign, int_assign)
