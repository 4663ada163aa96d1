"""Exact geometry of district partitions on a uniform grid of the unit square.

A plan is a total assignment of the g x g cells to district ids 1..k.  Cells
are indexed row-major with the bottom row first, so cell ``r * g + c`` covers
the half-open box [c/g, (c+1)/g) x [r/g, (r+1)/g).  Districts are unions of
cells (polyominoes, possibly disconnected), which keeps areas and perimeters
exact rationals:  area is cells/g^2 and perimeter counts cell edges whose
other side is a different district or the exterior, scaled by 1/g.

The best Polsby-Popper score a cell union can reach is pi/4 (a square block
of cells); the isoperimetric optimum of 1 belongs to the disc and is not
attainable here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidPartitionError, UnknownDistrictError

__all__ = [
    "CellPartition",
    "DistrictShape",
    "validate_partition",
    "district_shape",
    "polsby_popper",
    "polsby_popper_pi_coeff",
    "is_connected",
    "district_cells",
]


@dataclass(frozen=True)
class CellPartition:
    """Assignment of the g*g grid cells to districts 1..k.

    ``assignment`` is row-major with the bottom row first.  The structural
    invariants (every id in range, no empty district) are checked by
    :func:`validate_partition`; construction itself only checks shape so
    that transiently-invalid plans (e.g. mid-paint) can still be inspected.
    """

    g: int
    k: int
    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.g < 1:
            raise InvalidPartitionError(f"grid resolution must be >= 1, got {self.g}")
        if self.k < 1:
            raise InvalidPartitionError(f"district count must be >= 1, got {self.k}")
        if not isinstance(self.assignment, tuple):
            object.__setattr__(self, "assignment", tuple(self.assignment))
        if len(self.assignment) != self.g * self.g:
            raise InvalidPartitionError(
                f"assignment has {len(self.assignment)} cells, expected {self.g * self.g}"
            )

    def cell(self, row: int, col: int) -> int:
        """District id of the cell at (row, col), rows counted from the bottom."""
        return self.assignment[row * self.g + col]

    def with_cells(self, changes: dict[int, int]) -> "CellPartition":
        """Copy of this partition with ``changes`` (cell index -> district id) applied."""
        cells = list(self.assignment)
        for idx, did in changes.items():
            cells[idx] = did
        return CellPartition(self.g, self.k, tuple(cells))


@dataclass(frozen=True)
class DistrictShape:
    """Exact geometric summary of one district's cell union."""

    cells: int
    area: Fraction
    perimeter: Fraction
    connected: bool


def validate_partition(p: CellPartition) -> list[str]:
    """Return a list of invariant violations; empty means the plan is valid.

    Violations are data, not errors: painting tools and reports want to show
    them rather than crash.
    """
    violations = []
    seen = [0] * (p.k + 1)
    for idx, did in enumerate(p.assignment):
        if not 1 <= did <= p.k:
            violations.append(f"cell {idx} has district id {did} outside 1..{p.k}")
        else:
            seen[did] += 1
    for did in range(1, p.k + 1):
        if seen[did] == 0:
            violations.append(f"district {did} owns no cells")
    return violations


def district_cells(p: CellPartition, district: int) -> list[int]:
    """Cell indices owned by ``district``; raises if the id is unknown or empty."""
    if not 1 <= district <= p.k:
        raise UnknownDistrictError(f"district id {district} outside 1..{p.k}")
    cells = [i for i, d in enumerate(p.assignment) if d == district]
    if not cells:
        raise UnknownDistrictError(f"district {district} owns no cells")
    return cells


def _boundary_edge_count(p: CellPartition, district: int) -> int:
    """Number of unit-cell edges where ``district`` meets another district or the exterior."""
    g, a = p.g, p.assignment
    edges = 0
    for idx, d in enumerate(a):
        if d != district:
            continue
        r, c = divmod(idx, g)
        # exterior edges
        if r == 0:
            edges += 1
        if r == g - 1:
            edges += 1
        if c == 0:
            edges += 1
        if c == g - 1:
            edges += 1
        # interior edges against a different district
        if r > 0 and a[idx - g] != district:
            edges += 1
        if r < g - 1 and a[idx + g] != district:
            edges += 1
        if c > 0 and a[idx - 1] != district:
            edges += 1
        if c < g - 1 and a[idx + 1] != district:
            edges += 1
    return edges


def is_connected(p: CellPartition, district: int) -> bool:
    """True iff the district's cells form one 4-connected component."""
    cells = district_cells(p, district)
    member = set(cells)
    g = p.g
    stack = [cells[0]]
    seen = {cells[0]}
    while stack:
        idx = stack.pop()
        r, c = divmod(idx, g)
        for nidx in (
            idx - g if r > 0 else -1,
            idx + g if r < g - 1 else -1,
            idx - 1 if c > 0 else -1,
            idx + 1 if c < g - 1 else -1,
        ):
            if nidx >= 0 and nidx in member and nidx not in seen:
                seen.add(nidx)
                stack.append(nidx)
    return len(seen) == len(member)


def district_shape(p: CellPartition, district: int) -> DistrictShape:
    """Exact area, perimeter, and connectivity of one district.

    Perimeter counts boundary edges (neighbor in another district, or the
    exterior of the unit square) at length 1/g each, so ``perimeter * g`` is
    always an even integer >= 4.
    """
    cells = district_cells(p, district)
    g = p.g
    edge_count = _boundary_edge_count(p, district)
    return DistrictShape(
        cells=len(cells),
        area=Fraction(len(cells), g * g),
        perimeter=Fraction(edge_count, g),
        connected=is_connected(p, district),
    )


def polsby_popper_pi_coeff(shape: DistrictShape) -> Fraction:
    """Exact rational q with Polsby-Popper score = q * pi.

    q = 4 * area / perimeter^2; q <= 1/4 for every cell union, with equality
    exactly on square blocks.
    """
    return 4 * shape.area / (shape.perimeter * shape.perimeter)


def polsby_popper(shape: DistrictShape) -> float:
    """Polsby-Popper compactness 4*pi*area/perimeter^2 as a float."""
    return math.pi * float(polsby_popper_pi_coeff(shape))
