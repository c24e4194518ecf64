"""Bundled reliability data sets and a plain-text loader."""

from __future__ import annotations

import os
import re

import numpy as np

from .distributions import Sample
from .errors import EmptyDataset, ParseError

__all__ = ["FIXTURES", "fixture", "load_dataset", "parse_values"]

# failure times (thousands of miles) of locomotive controls
LOCOMOTIVE = (
    22.5, 37.5, 46.0, 48.5, 51.5, 53.0, 54.5, 57.5, 66.5, 68.0, 69.5, 76.5, 77.0,
    78.5, 80.0, 81.5, 82.0, 83.0, 84.0, 91.5, 93.5, 102.5, 107.0, 108.5, 112.5,
    113.5, 116.0, 117.0, 118.5, 119.0, 120.0, 122.5, 123.0, 127.5, 131.0, 132.5,
    134.0,
)

# endurance (millions of revolutions) of deep-groove ball bearings
BEARINGS = (
    17.88, 28.92, 33.00, 41.52, 42.12, 45.60, 48.40, 51.84, 51.96, 54.12, 55.56,
    67.80, 68.64, 68.64, 68.88, 84.12, 93.12, 98.64, 105.12, 105.84, 127.92,
    128.04, 173.40,
)

FIXTURES = {"locomotive": LOCOMOTIVE, "bearings": BEARINGS}

_SPLIT = re.compile(r"[,\s]+")


def fixture(name: str) -> Sample:
    try:
        return Sample(FIXTURES[name])
    except KeyError:
        raise ParseError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None


def parse_values(text: str) -> Sample:
    """Parse comma- or whitespace-separated numbers; ``#`` starts a comment line."""
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        for tok in _SPLIT.split(stripped):
            if not tok:
                continue
            try:
                v = float(tok)
            except ValueError:
                raise ParseError(f"line {lineno}: cannot parse {tok!r} as a number") from None
            if not np.isfinite(v):
                raise ParseError(f"line {lineno}: non-finite value {tok!r}")
            values.append(v)
    if not values:
        raise EmptyDataset("no numeric values found")
    return Sample(values)


def load_dataset(source: "str | os.PathLike") -> Sample:
    """Load a bundled fixture by name or a plain-text file by path."""
    if isinstance(source, str) and source in FIXTURES:
        return fixture(source)
    with open(source, encoding="utf-8") as fh:
        return parse_values(fh.read())
