"""Input validation and canonical (de)serialization of exact values."""
from __future__ import annotations

import json
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Any, Iterable, Sequence


def as_fraction(value: Any) -> Fraction:
    """Coerce ints, Fractions, and ``"p/q"`` strings to a Fraction.

    Floats are rejected: every computation in this package is exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rational numbers")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}: {value!r}")


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def check_int_matrix(rows: Any, name: str = "matrix") -> tuple[tuple[int, ...], ...]:
    """Return ``rows`` as a rectangular tuple of int tuples, or raise ValueError."""
    if isinstance(rows, str):
        rows = json.loads(rows)
    try:
        out = []
        for row in rows:
            out_row = []
            for entry in row:
                if isinstance(entry, bool):
                    raise ValueError
                if isinstance(entry, int):
                    out_row.append(entry)
                    continue
                q = as_fraction(entry)
                if q.denominator != 1:
                    raise ValueError
                out_row.append(q.numerator)
            out.append(tuple(out_row))
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} must be a list of lists of integers") from exc
    if not out or len({len(r) for r in out}) != 1 or len(out[0]) == 0:
        raise ValueError(f"{name} must be a nonempty rectangular array")
    return tuple(out)


def check_rational_vector(values: Any, length: int | None = None,
                          name: str = "vector") -> tuple[Fraction, ...]:
    if isinstance(values, str):
        values = json.loads(values)
    try:
        out = tuple(as_fraction(v) for v in values)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} must be a list of exact rationals") from exc
    if length is not None and len(out) != length:
        raise ValueError(f"{name} must have length {length}, got {len(out)}")
    return out


def check_int_vector(values: Any, length: int | None = None,
                     name: str = "vector") -> tuple[int, ...]:
    vec = check_rational_vector(values, length, name)
    if any(q.denominator != 1 for q in vec):
        raise ValueError(f"{name} must be integral")
    return tuple(q.numerator for q in vec)


def load_json_argument(text: str) -> Any:
    """Parse ``text`` as inline JSON, or as a path to a JSON file."""
    stripped = text.strip()
    if stripped[:1] in "[{\"" or stripped[:1].isdigit() or stripped[:1] == "-":
        return json.loads(stripped)
    return json.loads(Path(text).read_text(encoding="utf-8"))


def rational_list(values: Iterable) -> list[str]:
    return [format_rational(v) for v in values]


def sorted_index_sets(sets: Iterable[Iterable[int]]) -> list[list[int]]:
    """Canonical JSON view of a collection of index sets (1-based, sorted)."""
    return sorted((sorted(j + 1 for j in s) for s in sets), key=lambda s: (len(s), s))


def dot(u: Sequence, w: Sequence) -> Fraction | int:
    return sum(a * b for a, b in zip(u, w))
