"""Even-integer rounding tilings in sup-norm function spaces at finite
resolution: simple functions on a finite cell partition, rounded cell-wise to
the even integers.

The even-valued image is 2-separated and 1-dense on any fixed partition,
which is the finite witness of the lattice tiling by balls in sup norm.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np


class TilingError(ValueError):
    pass


@dataclass(frozen=True)
class SimpleFunction:
    """Finitely many disjoint cells with one real value per cell."""

    cells: tuple
    values: tuple

    def __init__(self, cells, values):
        cells = tuple(cells)
        values = tuple(float(v) for v in values)
        if len(cells) != len(values):
            raise TilingError("cells and values must have equal length")
        if len(set(cells)) != len(cells):
            raise TilingError("cells must be distinct")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "values", values)

    def value_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def to_json(self) -> dict:
        return {"cells": list(self.cells), "values": list(self.values)}

    @classmethod
    def from_json(cls, doc) -> "SimpleFunction":
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(doc["cells"], doc["values"])


def round_to_even(v: float) -> int:
    """The even integer 2k with v in [2k-1, 2k+1); half-open at the left."""
    return 2 * math.floor((v + 1.0) / 2.0)


def round_even(f: SimpleFunction) -> SimpleFunction:
    """Cell-wise even rounding; sup-distance to f is at most 1 exactly."""
    return SimpleFunction(f.cells, [round_to_even(v) for v in f.values])


def round_even_zero_dim(f: SimpleFunction, osc: float) -> tuple[SimpleFunction, float]:
    """Even rounding of cell representatives of an oscillating function.

    `osc` is the caller-declared oscillation of the underlying function on
    each cell; any function within osc of the representatives is within
    1 + osc of the rounded output in sup norm.
    """
    if osc < 0:
        raise TilingError("oscillation bound must be non-negative")
    return round_even(f), 1.0 + osc


def sup_distance(f: SimpleFunction, g: SimpleFunction) -> float:
    """Sup distance over the common refinement of the two partitions."""
    if f.cells == g.cells:
        return float(np.max(np.abs(f.value_array() - g.value_array()))) if f.cells else 0.0
    # disjoint atoms: a cell of f and a cell of g overlap only when equal,
    # so the refinement pairs equal labels and keeps the rest as-is
    common = set(f.cells) & set(g.cells)
    if not common:
        raise TilingError("partitions share no cells; no common refinement")
    fm = dict(zip(f.cells, f.values))
    gm = dict(zip(g.cells, g.values))
    return max(abs(fm[c] - gm[c]) for c in common)


def check_even_separation(g1: SimpleFunction, g2: SimpleFunction) -> float:
    """Sup distance of two even-valued simple functions; distinct functions
    are at distance >= 2 (asserted)."""
    for g in (g1, g2):
        for v in g.values:
            if v != round_to_even(v) and v != 2 * round(v / 2):
                raise TilingError(f"value {v} is not an even integer")
    d = sup_distance(g1, g2)
    if d != 0.0 and d < 2.0:
        raise TilingError(f"distinct even-valued functions at sup distance {d} < 2")
    return d
