"""Recursive shortest-splitline districting on the cell grid.

The districter sees only voter positions (A and B pooled), never party
labels.  Each stage splits a region's k districts into ceil(k/2) and
floor(k/2), scans a fixed fan of cut orientations times every offset that
changes the rasterized split, and keeps the cut dividing the region's
voters closest to the ceil:floor quota.  Remaining ties fall to the
shortest in-region cut, then the more vertical orientation, then the
split nearest the quota, then the smaller offset, so the output is a
pure function of the inputs.

Cuts are rasterized by cell center: a cell goes to the side of the line
containing its center, and centers exactly on the line go to side 1 (the
side the normal points into).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .electorate import Electorate, party_cell_counts
from .errors import ElectorateError, InfeasibleError
from .grid import CellPartition

__all__ = ["SplitlineConfig", "shortest_splitline", "rasterize_cut"]


@dataclass(frozen=True)
class SplitlineConfig:
    """Knobs for the cut search.

    angle_steps: number of cut orientations, theta = t*pi/angle_steps.
    population_tolerance: splits within this many votes of the quota count
    as equally balanced, letting the shorter cut win; balance still breaks
    ties between equally short cuts.
    """

    angle_steps: int = 180
    population_tolerance: int = 0

    def __post_init__(self) -> None:
        if self.angle_steps < 2:
            raise ValueError(f"angle_steps must be >= 2, got {self.angle_steps}")
        if self.population_tolerance < 0:
            raise ValueError("population_tolerance must be >= 0")


_HALF_SQRT2 = math.sqrt(0.5)

# (sin, cos) for multiples of 45 degrees, kept exact so that collinear cell
# centers project to bit-identical values (float cos(pi/2) is 6.1e-17, and
# that ulp of noise is enough to split a column into two spurious offsets)
_EXACT_TRIG = (
    (0.0, 1.0),
    (_HALF_SQRT2, _HALF_SQRT2),
    (1.0, 0.0),
    (_HALF_SQRT2, -_HALF_SQRT2),
    (0.0, -1.0),
    (-_HALF_SQRT2, -_HALF_SQRT2),
    (-1.0, 0.0),
    (-_HALF_SQRT2, _HALF_SQRT2),
)


def _direction(angle: float) -> tuple[float, float]:
    """(sin, cos) of the cut direction, exact at multiples of 45 degrees."""
    m = angle / (math.pi / 4)
    nearest = round(m)
    if abs(m - nearest) < 1e-9:
        return _EXACT_TRIG[int(nearest) % 8]
    return math.sin(angle), math.cos(angle)


def _projections(region: np.ndarray, g: int, sin_t: float, cos_t: float) -> np.ndarray:
    """Signed distance of each cell center along the cut normal (-sin, cos).

    Centers are handled as the odd integers (2c+1, 2r+1) over 2g and the
    axis-aligned and diagonal cases reduce to single integer expressions, so
    cells that are genuinely collinear share one float projection.  Other
    orientations have irrational tangent and no exact ties to preserve.
    """
    rows, cols = np.divmod(region, g)
    u = 2 * cols + 1
    v = 2 * rows + 1
    scale = 1.0 / (2 * g)
    if sin_t == 0.0:
        return (cos_t * scale) * v
    if cos_t == 0.0:
        return (-sin_t * scale) * u
    if sin_t == cos_t:
        return (sin_t * scale) * (v - u)
    if sin_t == -cos_t:
        return (cos_t * scale) * (u + v)
    return (cos_t * v - sin_t * u) * scale


def rasterize_cut(angle: float, offset: float, region, g: int) -> tuple[list[int], list[int]]:
    """Split ``region`` cells by the line at ``angle`` (direction, radians).

    Side 1 collects cells whose center projects at or beyond ``offset`` along
    the normal (-sin angle, cos angle); side 2 gets the rest.  One side may
    be empty when the line misses the region.
    """
    cells = np.asarray(sorted(int(c) for c in region), dtype=np.int64)
    sin_t, cos_t = _direction(angle)
    s = _projections(cells, g, sin_t, cos_t)
    side1 = s >= offset
    return [int(c) for c in cells[side1]], [int(c) for c in cells[~side1]]


def _cut_length(sin_t: float, cos_t: float, offset: float, region: np.ndarray, g: int) -> float:
    """Length of the cut line clipped to the region's cell union."""
    nx, ny = -sin_t, cos_t
    dx, dy = cos_t, sin_t
    px, py = offset * nx, offset * ny
    rows, cols = np.divmod(region, g)
    tmin = np.full(region.shape, -np.inf)
    tmax = np.full(region.shape, np.inf)
    ok = np.ones(region.shape, dtype=bool)
    for p, d, lo, hi in ((px, dx, cols / g, (cols + 1) / g), (py, dy, rows / g, (rows + 1) / g)):
        if abs(d) < 1e-15:
            ok &= (lo <= p) & (p <= hi)
        else:
            t0, t1 = (lo - p) / d, (hi - p) / d
            if d < 0:
                t0, t1 = t1, t0
            tmin = np.maximum(tmin, t0)
            tmax = np.minimum(tmax, t1)
    spans = np.where(ok & (tmax > tmin), tmax - tmin, 0.0)
    return float(spans.sum())


def _best_cut(
    region: np.ndarray, pop: np.ndarray, k1: int, k2: int, g: int, cfg: SplitlineConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Pick the quota-best cut of ``region`` and return (side1, side2) cells."""
    region_pop = pop[region]
    voters = int(region_pop.sum())
    populated = region_pop > 0
    total_populated = int(populated.sum())
    k = k1 + k2
    slack = k * cfg.population_tolerance

    best_imbalance = None
    candidates: list[tuple[int, int, float, int]] = []  # (angle idx, split pos, offset, raw imbalance)
    projections: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    trig = [_direction(t * math.pi / cfg.angle_steps) for t in range(cfg.angle_steps)]

    for t in range(cfg.angle_steps):
        s = _projections(region, g, *trig[t])
        order = np.argsort(s, kind="stable")
        s_sorted = s[order]
        pop_cum = np.cumsum(region_pop[order])
        cells_cum = np.cumsum(populated[order])
        projections[t] = (s, s_sorted)
        # candidate offsets: every value where the sorted projection changes;
        # side 2 is the strict-below prefix, side 1 the rest (on-line -> side 1)
        boundaries = np.nonzero(s_sorted[1:] > s_sorted[:-1])[0]  # split after index i
        for i in boundaries:
            cells2 = int(cells_cum[i])
            if cells2 < k2 or total_populated - cells2 < k1:
                continue
            voters1 = voters - int(pop_cum[i])
            raw = abs(k * voters1 - voters * k1)
            imbalance = 0 if raw <= slack else raw
            if best_imbalance is None or imbalance < best_imbalance:
                best_imbalance = imbalance
                candidates = [(t, int(i), float(s_sorted[i + 1]), raw)]
            elif imbalance == best_imbalance:
                candidates.append((t, int(i), float(s_sorted[i + 1]), raw))

    if best_imbalance is None:
        raise InfeasibleError(
            f"no cut can give both sides enough populated cells for {k1}+{k2} districts"
        )

    def tie_key(cand: tuple[int, int, float, int]):
        t, _i, offset, raw = cand
        sin_t, cos_t = trig[t]
        length = round(_cut_length(sin_t, cos_t, offset, region, g), 9)
        return (length, abs(cos_t), raw, offset, t)

    t, _i, offset, _raw = min(candidates, key=tie_key)
    s = projections[t][0]
    side1 = region[s >= offset]
    side2 = region[s < offset]
    return side1, side2


def shortest_splitline(
    e: Electorate, k: int, g: int, cfg: SplitlineConfig | None = None
) -> CellPartition:
    """Deterministic splitline plan with k districts on the g x g grid.

    Splits recurse on voter counts only (party labels are never read), so
    swapping A and B yields the identical partition.
    """
    if cfg is None:
        cfg = SplitlineConfig()
    if k < 1:
        raise InfeasibleError(f"district count must be >= 1, got {k}")
    if g < 1:
        raise InfeasibleError(f"grid resolution must be >= 1, got {g}")
    if e.total == 0:
        raise ElectorateError("cannot district an empty electorate")
    hist_a, hist_b = party_cell_counts(e, g)
    pop = hist_a + hist_b
    populated = int((pop > 0).sum())
    if k > populated:
        raise InfeasibleError(f"k={k} exceeds the {populated} populated cells at g={g}")

    assignment = np.zeros(g * g, dtype=np.int64)

    def split(region: np.ndarray, kk: int, base: int) -> None:
        if kk == 1:
            assignment[region] = base
            return
        k1 = (kk + 1) // 2
        k2 = kk - k1
        side1, side2 = _best_cut(region, pop, k1, k2, g, cfg)
        split(side1, k1, base)
        split(side2, k2, base + k1)

    split(np.arange(g * g, dtype=np.int64), k, 1)
    return CellPartition(g, k, tuple(int(d) for d in assignment))
