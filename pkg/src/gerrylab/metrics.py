"""Plan scoring: wasted votes, efficiency gap, balance, seats, desiderata.

All vote arithmetic is exact (integers and fractions).  Sign convention for
the efficiency gap: it sums (A's wasted votes - B's wasted votes) over
districts and divides by the electorate size, so negative values mean B
wasted more, i.e. the plan favors A.  A party that carries a district wastes
its votes beyond ceil(pop/2); the losing party wastes everything.  In a tied
district neither side carried it, so both waste all their votes; reports
flag ties so the convention is visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .electorate import Electorate, party_cell_counts
from .errors import ElectorateError, InvalidPartitionError
from .grid import (
    CellPartition,
    district_shape,
    polsby_popper,
    polsby_popper_pi_coeff,
)

__all__ = [
    "as_fraction",
    "DistrictTally",
    "DesiderataParams",
    "DesideratumResult",
    "DesiderataReport",
    "PlanReport",
    "wasted_votes",
    "district_tallies",
    "efficiency_gap",
    "population_balance_delta",
    "seats",
    "check_desiderata",
    "simplified_eg",
    "plan_report",
]


def as_fraction(x) -> Fraction:
    """Lift a threshold to an exact rational.

    Floats are read at their printed decimal value (0.07 becomes 7/100, not
    the nearest binary double), so thresholds behave the way they were
    written.  Ints, Fractions, and decimal strings pass through exactly.
    """
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"threshold must be finite, got {x}")
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class DistrictTally:
    district: int
    pop: int
    a_count: int
    b_count: int
    winner: str  # "A", "B", or "tie"
    wasted_a: int
    wasted_b: int


@dataclass(frozen=True)
class DesiderataParams:
    """Thresholds for the three plan requirements.

    delta: allowed relative deviation from an even voter split, in [0, 1).
    compactness_c: perimeter^2 <= C * area for every district (equivalently
    Polsby-Popper score >= 4*pi/C).  alpha: efficiency-gap margin, requiring
    |EG| < 1/2 - alpha.  beta: the EG requirement applies only when the
    statewide vote imbalance ||A|-|B|| is below beta * |A u B|.
    """

    delta: float = 0.07
    compactness_c: float = 4 * math.pi / 0.2
    alpha: float = 0.42
    beta: float = 0.58

    def __post_init__(self) -> None:
        if not 0 <= self.delta < 1:
            raise ValueError(f"delta must be in [0, 1), got {self.delta}")
        if self.compactness_c <= 0:
            raise ValueError(f"compactness_c must be positive, got {self.compactness_c}")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")


@dataclass(frozen=True)
class DesideratumResult:
    passed: bool
    detail: str


@dataclass(frozen=True)
class DesiderataReport:
    params: DesiderataParams
    balance: DesideratumResult
    compactness: DesideratumResult
    efficiency: DesideratumResult

    @property
    def all_pass(self) -> bool:
        return self.balance.passed and self.compactness.passed and self.efficiency.passed


def wasted_votes(a_count: int, b_count: int) -> tuple[int, int]:
    """Wasted votes (A, B) in a single district.

    The winner wastes its excess over ceil(pop/2); the loser wastes all its
    votes.  On a tie both sides waste everything, since neither carried the
    district.
    """
    if a_count < 0 or b_count < 0:
        raise ValueError("vote counts must be nonnegative")
    pop = a_count + b_count
    threshold = (pop + 1) // 2  # ceil(pop/2)
    if a_count > b_count:
        return a_count - threshold, b_count
    if b_count > a_count:
        return a_count, b_count - threshold
    return a_count, b_count


def _district_vote_counts(e: Electorate, p: CellPartition) -> tuple[np.ndarray, np.ndarray]:
    hist_a, hist_b = party_cell_counts(e, p.g)
    assign = np.asarray(p.assignment, dtype=np.int64)
    if assign.min() < 1 or assign.max() > p.k:
        raise InvalidPartitionError("assignment contains district ids outside 1..k")
    a = np.zeros(p.k + 1, dtype=np.int64)
    b = np.zeros(p.k + 1, dtype=np.int64)
    np.add.at(a, assign, hist_a)
    np.add.at(b, assign, hist_b)
    return a[1:], b[1:]


def district_tallies(e: Electorate, p: CellPartition) -> list[DistrictTally]:
    """Per-district population, party counts, winner, and wasted votes."""
    a_counts, b_counts = _district_vote_counts(e, p)
    tallies = []
    for i in range(p.k):
        a, b = int(a_counts[i]), int(b_counts[i])
        wa, wb = wasted_votes(a, b)
        winner = "A" if a > b else ("B" if b > a else "tie")
        tallies.append(DistrictTally(i + 1, a + b, a, b, winner, wa, wb))
    return tallies


def efficiency_gap(e: Electorate, p: CellPartition) -> Fraction:
    """Exact efficiency gap: sum of (wasted_A - wasted_B) over |A u B|.

    Always lies in [-1/2, 1/2]; negative favors A.
    """
    total = e.total
    if total == 0:
        raise ElectorateError("efficiency gap is undefined for an empty electorate")
    num = sum(t.wasted_a - t.wasted_b for t in district_tallies(e, p))
    return Fraction(num, total)


def population_balance_delta(e: Electorate, p: CellPartition) -> Fraction:
    """Smallest delta putting every district within the (1 +- delta) voter band.

    The band is (1-delta)*floor(P/k) <= pop_i <= (1+delta)*ceil(P/k); the
    result is 0 when every district already sits between floor and ceil.
    """
    total = e.total
    if total // p.k == 0:
        raise ElectorateError(f"floor({total}/{p.k}) is zero; delta is undefined")
    lo = Fraction(total // p.k)
    hi = Fraction(-(-total // p.k))
    a_counts, b_counts = _district_vote_counts(e, p)
    delta = Fraction(0)
    for i in range(p.k):
        pop = int(a_counts[i] + b_counts[i])
        delta = max(delta, 1 - Fraction(pop) / lo, Fraction(pop) / hi - 1)
    return delta


def seats(e: Electorate, p: CellPartition) -> tuple[int, int, int]:
    """(A-majority districts, B-majority districts, ties)."""
    tallies = district_tallies(e, p)
    sa = sum(1 for t in tallies if t.winner == "A")
    sb = sum(1 for t in tallies if t.winner == "B")
    return sa, sb, p.k - sa - sb


def check_desiderata(e: Electorate, p: CellPartition, params: DesiderataParams) -> DesiderataReport:
    """Evaluate the balance, compactness, and efficiency requirements.

    Each result carries the first violating district or quantity.  Thresholds
    are compared exactly (float parameters are lifted to rationals), except
    that compactness is stated on perimeter^2 <= C * area, which is rational
    on both sides.  The efficiency requirement is conditional: it only binds
    when the statewide vote imbalance is below beta * |A u B|.
    """
    # (i) balance
    delta = population_balance_delta(e, p)
    if delta <= as_fraction(params.delta):
        balance = DesideratumResult(True, f"delta achieved {float(delta):.6g} <= {params.delta}")
    else:
        balance = DesideratumResult(
            False, f"delta achieved {float(delta):.6g} > {params.delta}"
        )

    # (ii) compactness
    compactness = DesideratumResult(
        True, f"all districts satisfy perimeter^2 <= {params.compactness_c:.6g} * area"
    )
    c_exact = as_fraction(params.compactness_c)
    for i in range(1, p.k + 1):
        if not any(d == i for d in p.assignment):
            compactness = DesideratumResult(False, f"district {i} is empty")
            break
        shape = district_shape(p, i)
        if shape.perimeter**2 > c_exact * shape.area:
            ratio = float(shape.perimeter**2 / shape.area)
            compactness = DesideratumResult(
                False,
                f"district {i} has perimeter^2/area = {ratio:.6g} > {params.compactness_c:.6g}",
            )
            break

    # (iii) partisan efficiency, conditional on near-balanced statewide vote
    imbalance = Fraction(abs(e.a_count - e.b_count), e.total) if e.total else Fraction(0)
    if imbalance >= as_fraction(params.beta):
        efficiency = DesideratumResult(
            True,
            f"vacuous: vote imbalance {float(imbalance):.6g} >= beta {params.beta}",
        )
    else:
        eg = efficiency_gap(e, p)
        bound = Fraction(1, 2) - as_fraction(params.alpha)
        if abs(eg) < bound:
            efficiency = DesideratumResult(
                True, f"|EG| = {float(abs(eg)):.6g} < {float(bound):.6g}"
            )
        else:
            efficiency = DesideratumResult(
                False, f"|EG| = {float(abs(eg)):.6g} >= {float(bound):.6g}"
            )
    return DesiderataReport(params, balance, compactness, efficiency)


def simplified_eg(vote_share_a, seat_share_a) -> Fraction:
    """Shortcut efficiency gap 2*v_A - s_A - 1/2 from statewide shares.

    Exact for plans whose districts all have the same even population and no
    ties; within k/(2P) of the full definition when populations are odd.
    Implies the 8% flagging floor for any party above 79% of the vote.
    """
    v = as_fraction(vote_share_a)
    s = as_fraction(seat_share_a)
    if not (0 <= v <= 1 and 0 <= s <= 1):
        raise ValueError("shares must lie in [0, 1]")
    return 2 * v - s - Fraction(1, 2)


@dataclass(frozen=True)
class PlanReport:
    """Everything a plan evaluation produces, exact where possible.

    ``pp_pi_coeffs`` holds the rational q with score = q*pi per district
    (None for an empty district); ``pp_scores`` are the float renderings.
    Empty districts are reported, not rejected, so interactive painting can
    pass through invalid intermediate states.
    """

    g: int
    k: int
    total_a: int
    total_b: int
    tallies: tuple[DistrictTally, ...]
    eg: Fraction
    delta_achieved: Fraction
    pp_scores: tuple[float | None, ...]
    pp_pi_coeffs: tuple[Fraction | None, ...]
    min_pp: float | None
    seats_a: int
    seats_b: int
    ties: int
    empty_districts: tuple[int, ...]
    desiderata: DesiderataReport | None


def plan_report(
    e: Electorate, p: CellPartition, params: DesiderataParams | None = None
) -> PlanReport:
    """Score a plan: tallies, EG, balance, compactness, seats, desiderata."""
    tallies = tuple(district_tallies(e, p))
    empty = tuple(i for i in range(1, p.k + 1) if not any(d == i for d in p.assignment))
    pp_coeffs: list[Fraction | None] = []
    pp_scores: list[float | None] = []
    for i in range(1, p.k + 1):
        if i in empty:
            pp_coeffs.append(None)
            pp_scores.append(None)
        else:
            shape = district_shape(p, i)
            pp_coeffs.append(polsby_popper_pi_coeff(shape))
            pp_scores.append(polsby_popper(shape))
    known = [s for s in pp_scores if s is not None]
    sa, sb, ties = seats(e, p)
    return PlanReport(
        g=p.g,
        k=p.k,
        total_a=e.a_count,
        total_b=e.b_count,
        tallies=tallies,
        eg=efficiency_gap(e, p),
        delta_achieved=population_balance_delta(e, p),
        pp_scores=tuple(pp_scores),
        pp_pi_coeffs=tuple(pp_coeffs),
        min_pp=min(known) if known else None,
        seats_a=sa,
        seats_b=sb,
        ties=ties,
        empty_districts=empty,
        desiderata=check_desiderata(e, p, params) if params is not None else None,
    )
