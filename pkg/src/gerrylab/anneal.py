"""Simulated-annealing plan search and the compactness/efficiency sweep.

The optimizer walks the space of cell assignments with single-cell boundary
flips: pick a random cell, push it into the district of a random 4-neighbor,
reject the move if it would empty a district.  Moves are scored by

    |EG| + lambda_pop * max(0, delta - delta_cap)
        + lambda_pp * sum_i max(0, pp_floor - pp_i)
        + lambda_conn * (number of disconnected districts)

and accepted by the Metropolis rule under a geometric cooling schedule, so a
given seed always reproduces the same chain.  Districts may disconnect
mid-run; that is penalized (when lambda_conn > 0), never forbidden, because
hard connectivity rules cripple mixing.  The best plan ever seen is what
comes back, not the final state.

Everything the objective needs is maintained incrementally with integer
tallies; |EG| enters as abs(integer waste difference) / population, so the
chain consumes an identical random stream when party labels are swapped.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from fractions import Fraction

from .electorate import Electorate, party_cell_counts
from .errors import ElectorateError, InfeasibleError
from .grid import CellPartition
from .metrics import plan_report
from .splitline import SplitlineConfig, shortest_splitline

__all__ = ["AnnealConfig", "TraceEntry", "AnnealResult", "ParetoPoint", "anneal", "pareto_sweep"]

_FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class AnnealConfig:
    """Chain parameters; the defaults suit g=24 grids with a few districts."""

    seed: int = 0
    steps: int = 200_000
    t_initial: float = 0.30
    t_final: float = 1e-4
    lambda_pop: float = 10.0
    lambda_pp: float = 20.0
    lambda_conn: float = 0.0
    pp_floor: float = 0.10
    delta_cap: float = 0.05
    trace_every: int = 1000

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if not 0 < self.t_final <= self.t_initial:
            raise ValueError("temperatures must satisfy 0 < t_final <= t_initial")
        if self.lambda_pop < 0 or self.lambda_pp < 0 or self.lambda_conn < 0:
            raise ValueError("penalty weights must be nonnegative")
        if not 0 <= self.pp_floor <= 1:
            raise ValueError(f"pp_floor must be in [0, 1], got {self.pp_floor}")
        if not 0 <= self.delta_cap < 1:
            raise ValueError(f"delta_cap must be in [0, 1), got {self.delta_cap}")
        if self.trace_every < 1:
            raise ValueError("trace_every must be >= 1")


@dataclass(frozen=True)
class TraceEntry:
    step: int
    temperature: float
    objective: float
    accepted: bool
    best_objective: float


@dataclass(frozen=True)
class AnnealResult:
    plan: CellPartition
    trace: tuple[TraceEntry, ...]
    best_objective: float
    accepted: int
    steps: int


@dataclass(frozen=True)
class ParetoPoint:
    """One tradeoff point; the stored metrics are recomputable from the plan."""

    pp_floor: float
    min_pp: float | None
    abs_eg: Fraction
    delta: Fraction
    plan: CellPartition


def _waste_diff(a: int, p: int) -> int:
    """wasted_A - wasted_B for a district with a A-votes among p voters."""
    lead = 2 * a - p  # a - b
    if lead > 0:
        return lead - ((p + 1) >> 1)
    if lead < 0:
        return lead + ((p + 1) >> 1)
    return 0


def _district_connected(cells: set[int], start: int, g: int) -> bool:
    seen = {start}
    stack = [start]
    while stack:
        idx = stack.pop()
        r, c = divmod(idx, g)
        for nb in (
            idx - g if r > 0 else -1,
            idx + g if r < g - 1 else -1,
            idx - 1 if c > 0 else -1,
            idx + 1 if c < g - 1 else -1,
        ):
            if nb >= 0 and nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)


def anneal(e: Electorate, k: int, g: int, cfg: AnnealConfig | None = None) -> AnnealResult:
    """Search for a low-|EG| plan under soft balance/compactness penalties.

    Deterministic for a given config: the chain is a pure function of the
    seed.  Starts from the splitline plan (compact, balanced, party-blind)
    and returns the best plan seen, which always has k nonempty districts.
    """
    if cfg is None:
        cfg = AnnealConfig()
    cells = g * g
    if k < 1 or k > cells:
        raise InfeasibleError(f"k={k} is infeasible on a {g}x{g} grid")
    if e.total == 0:
        raise ElectorateError("cannot anneal an empty electorate")
    if e.total // k == 0:
        raise InfeasibleError(f"only {e.total} voters for k={k} districts")

    hist_a, hist_b = party_cell_counts(e, g)
    cell_a = [int(x) for x in hist_a]
    cell_pop = [int(a + b) for a, b in zip(hist_a, hist_b)]
    total = e.total
    lo_band = total // k
    hi_band = -(-total // k)

    # Flat neighbor table: nbr[4*idx + d], -1 where the grid ends.
    nbr = [-1] * (4 * cells)
    for idx in range(cells):
        r, c = divmod(idx, g)
        if r > 0:
            nbr[4 * idx] = idx - g
        if r < g - 1:
            nbr[4 * idx + 1] = idx + g
        if c > 0:
            nbr[4 * idx + 2] = idx - 1
        if c < g - 1:
            nbr[4 * idx + 3] = idx + 1

    # Initial plan: the deterministic splitline partition (tolerance of half
    # a grid line keeps the cuts straight), so the chain starts compact and
    # balanced.  Electorates too concentrated to split fall back to
    # row-major runs of ceil/floor(cells/k) cells.
    try:
        start = shortest_splitline(
            e, k, g, SplitlineConfig(population_tolerance=(g + 1) // 2)
        )
        assignment = list(start.assignment)
    except InfeasibleError:
        assignment = [0] * cells
        base, extra = divmod(cells, k)
        pos = 0
        for d in range(1, k + 1):
            run = base + (1 if d <= extra else 0)
            for _ in range(run):
                assignment[pos] = d
                pos += 1

    pops = [0] * (k + 1)
    a_votes = [0] * (k + 1)
    sizes = [0] * (k + 1)
    edges = [0] * (k + 1)
    for idx in range(cells):
        d = assignment[idx]
        pops[d] += cell_pop[idx]
        a_votes[d] += cell_a[idx]
        sizes[d] += 1
        for j in range(4):
            nb = nbr[4 * idx + j]
            if nb < 0 or assignment[nb] != d:
                edges[d] += 1

    waste = [0] * (k + 1)
    for d in range(1, k + 1):
        waste[d] = _waste_diff(a_votes[d], pops[d])
    w_sum = sum(waste[1:])

    def pp_shortfall(d_sizes, d_edges):
        pp = _FOUR_PI * d_sizes / (d_edges * d_edges)
        gap = cfg.pp_floor - pp
        return gap if gap > 0.0 else 0.0

    shortfalls = [0.0] * (k + 1)
    for d in range(1, k + 1):
        shortfalls[d] = pp_shortfall(sizes[d], edges[d])
    shortfall_sum = sum(shortfalls[1:])

    track_conn = cfg.lambda_conn > 0.0
    district_cells: list[set[int]] = [set() for _ in range(k + 1)]
    connected = [True] * (k + 1)
    disc_count = 0
    if track_conn:
        for idx in range(cells):
            district_cells[assignment[idx]].add(idx)
        for d in range(1, k + 1):
            connected[d] = _district_connected(district_cells[d], next(iter(district_cells[d])), g)
            if not connected[d]:
                disc_count += 1

    def pop_penalty(p_list) -> float:
        worst = 0.0
        for d in range(1, k + 1):
            p = p_list[d]
            under = 1.0 - p / lo_band
            over = p / hi_band - 1.0
            if under > worst:
                worst = under
            if over > worst:
                worst = over
        excess = worst - cfg.delta_cap
        return excess if excess > 0.0 else 0.0

    def objective_now() -> float:
        return (
            abs(w_sum) / total
            + cfg.lambda_pop * pop_penalty(pops)
            + cfg.lambda_pp * shortfall_sum
            + cfg.lambda_conn * disc_count
        )

    obj = objective_now()
    best_obj = obj
    best_assignment = assignment.copy()

    rng = random.Random(cfg.seed)
    t = cfg.t_initial
    factor = (
        (cfg.t_final / cfg.t_initial) ** (1.0 / (cfg.steps - 1)) if cfg.steps > 1 else 1.0
    )
    exp = math.exp
    randrange = rng.randrange
    rand = rng.random
    lam_pop, lam_pp, lam_conn = cfg.lambda_pop, cfg.lambda_pp, cfg.lambda_conn

    trace: list[TraceEntry] = []
    accepted_total = 0

    for step in range(cfg.steps):
        cell = randrange(cells)
        direction = randrange(4)
        accepted = False
        nb_cell = nbr[4 * cell + direction]
        if nb_cell >= 0:
            u = assignment[cell]
            v = assignment[nb_cell]
            if u != v and sizes[u] > 1:
                nu = 0
                nv = 0
                for j in range(4):
                    nb2 = nbr[4 * cell + j]
                    if nb2 >= 0:
                        d2 = assignment[nb2]
                        if d2 == u:
                            nu += 1
                        elif d2 == v:
                            nv += 1
                cp = cell_pop[cell]
                ca = cell_a[cell]
                new_pop_u = pops[u] - cp
                new_pop_v = pops[v] + cp
                new_wu = _waste_diff(a_votes[u] - ca, new_pop_u)
                new_wv = _waste_diff(a_votes[v] + ca, new_pop_v)
                new_w_sum = w_sum - waste[u] - waste[v] + new_wu + new_wv
                new_edges_u = edges[u] + 2 * nu - 4
                new_edges_v = edges[v] + 4 - 2 * nv
                new_sf_u = pp_shortfall(sizes[u] - 1, new_edges_u)
                new_sf_v = pp_shortfall(sizes[v] + 1, new_edges_v)
                new_shortfall = shortfall_sum - shortfalls[u] - shortfalls[v] + new_sf_u + new_sf_v

                pops[u], pops[v] = new_pop_u, new_pop_v
                pop_term = pop_penalty(pops)

                new_disc = disc_count
                conn_u = connected[u]
                conn_v = connected[v]
                if track_conn:
                    cu = district_cells[u]
                    cu.discard(cell)
                    conn_u = _district_connected(cu, next(iter(cu)), g)
                    cv = district_cells[v]
                    cv.add(cell)
                    conn_v = connected[v] or _district_connected(cv, cell, g)
                    new_disc = (
                        disc_count
                        + (0 if conn_u else 1)
                        - (0 if connected[u] else 1)
                        + (0 if conn_v else 1)
                        - (0 if connected[v] else 1)
                    )

                new_obj = (
                    abs(new_w_sum) / total
                    + lam_pop * pop_term
                    + lam_pp * new_shortfall
                    + lam_conn * new_disc
                )
                de = new_obj - obj
                if de <= 0.0 or rand() < exp(-de / t):
                    accepted = True
                    accepted_total += 1
                    assignment[cell] = v
                    a_votes[u] -= ca
                    a_votes[v] += ca
                    sizes[u] -= 1
                    sizes[v] += 1
                    edges[u] = new_edges_u
                    edges[v] = new_edges_v
                    waste[u] = new_wu
                    waste[v] = new_wv
                    w_sum = new_w_sum
                    shortfalls[u] = new_sf_u
                    shortfalls[v] = new_sf_v
                    shortfall_sum = new_shortfall
                    if track_conn:
                        connected[u] = conn_u
                        connected[v] = conn_v
                        disc_count = new_disc
                    obj = new_obj
                    if new_obj < best_obj:
                        best_obj = new_obj
                        best_assignment = assignment.copy()
                else:
                    pops[u], pops[v] = pops[u] + cp, pops[v] - cp
                    if track_conn:
                        district_cells[u].add(cell)
                        district_cells[v].discard(cell)
        if step % cfg.trace_every == 0 or step == cfg.steps - 1:
            trace.append(TraceEntry(step, t, obj, accepted, best_obj))
        t *= factor

    plan = CellPartition(g, k, tuple(best_assignment))
    return AnnealResult(
        plan=plan,
        trace=tuple(trace),
        best_objective=best_obj,
        accepted=accepted_total,
        steps=cfg.steps,
    )


def pareto_sweep(
    e: Electorate, k: int, g: int, floors, cfg: AnnealConfig | None = None
) -> list[ParetoPoint]:
    """One anneal per compactness floor, most demanding floor first.

    Chain i runs with seed cfg.seed + i, so the sweep is reproducible and
    each floor gets an independent stream.  Stored metrics come from a fresh
    plan_report on the returned plan.
    """
    if cfg is None:
        cfg = AnnealConfig()
    floors = [float(f) for f in floors]
    if not floors:
        raise ValueError("floors must be nonempty")
    if any(f1 < f2 for f1, f2 in zip(floors, floors[1:])):
        raise ValueError("floors must be sorted descending")
    points = []
    for i, floor in enumerate(floors):
        run_cfg = replace(cfg, pp_floor=floor, seed=cfg.seed + i)
        result = anneal(e, k, g, run_cfg)
        rep = plan_report(e, result.plan)
        points.append(
            ParetoPoint(
                pp_floor=floor,
                min_pp=rep.min_pp,
                abs_eg=abs(rep.eg),
                delta=rep.delta_achieved,
                plan=result.plan,
            )
        )
    return points
