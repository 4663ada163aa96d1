"""Impossibility bounds, witness construction, verification, and an oracle.

The core result: once districts must be population-balanced (i) and compact
(ii), a striped electorate with a thin statewide majority forces every
district to the majority party, so the efficiency gap (iii) blows up.  This
module computes the quantitative side of that argument:

* ``min_perimeter_F`` gives the perimeter floor any balanced compact
  district inherits from the isoperimetric inequality.
* ``boundary_cell_bound`` counts how many epsilon-cells a district boundary
  can touch, which caps how far rasterized vote counts drift from areas.
* ``ratio_bound`` turns those into a floor on each district's B:A ratio.
* ``construct_witness`` picks a stripe pattern (gamma) and a lattice
  resolution (n) so the floor clears the stripe ratio b/a, making every
  district A-majority with certified margins on |EG| and vote imbalance.
* ``verify_witness`` checks an actual plan against an actual electorate and
  certifies the violation of (iii) whenever (i) and (ii) hold.
* ``brute_force_oracle`` exhaustively replays the claim on toy grids with
  its own self-contained arithmetic, so nothing above gets to grade its own
  homework.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .electorate import Electorate, LatticeParams, generate_lattice_electorate
from .errors import ElectorateError, InfeasibleError, InvalidPartitionError
from .grid import CellPartition, validate_partition
from .metrics import (
    DesideratumResult,
    DesiderataParams,
    as_fraction,
    check_desiderata,
    district_tallies,
    efficiency_gap,
    population_balance_delta,
)

__all__ = [
    "TheoremParams",
    "WitnessConfig",
    "CertificationReport",
    "OracleSummary",
    "boundary_cell_bound",
    "min_perimeter_F",
    "ratio_bound",
    "eg_lower_bound",
    "vote_imbalance",
    "construct_witness",
    "witness_electorate",
    "verify_witness",
    "brute_force_oracle",
]

# Slack for comparisons between double-precision bounds and exact rationals.
# Certification always takes the conservative side of the slack.
FLOAT_SLACK = 1e-12


@dataclass(frozen=True)
class TheoremParams:
    """Desiderata thresholds the impossibility statement is quantified over.

    delta and compactness_c define requirements (i) and (ii); alpha sets the
    efficiency-gap magnitude 1/2 - alpha that counts as a violation of
    (iii); beta caps the statewide imbalance so (iii) is not vacuous; k is
    the number of districts.
    """

    delta: float = 0.05
    compactness_c: float = 18.5
    alpha: float = 0.42
    beta: float = 0.58
    k: int = 2

    def __post_init__(self) -> None:
        if not 0 <= self.delta < 1:
            raise ValueError(f"delta must be in [0, 1), got {self.delta}")
        if self.compactness_c <= 0:
            raise ValueError("compactness_c must be positive")
        if not 0 < self.alpha < 0.5:
            raise ValueError(f"alpha must be in (0, 1/2), got {self.alpha}")
        if not 0 < self.beta < 1:
            raise ValueError(f"beta must be in (0, 1), got {self.beta}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")

    def desiderata(self) -> DesiderataParams:
        return DesiderataParams(
            delta=self.delta,
            compactness_c=self.compactness_c,
            alpha=self.alpha,
            beta=self.beta,
        )


@dataclass(frozen=True)
class WitnessConfig:
    """A concrete electorate recipe with its certified margins.

    The electorate is the n x n grid of epsilon-squares, each holding an
    l x l block of voters with the first a slots (bottom-left, row-major)
    for A and the remaining b for B.  gamma = 1 - b/a is the stripe
    thinness; eps = 1/n the square size; min_perimeter the floor F for any
    district under (i) and (ii); ratio_bound_value the certified floor on
    per-district B:A ratios; eg_bound the efficiency gap every conforming
    plan is pushed at or below; imbalance the statewide |A-B| share.
    """

    n: int
    l: int
    a: int
    b: int
    gamma: Fraction
    eps: Fraction
    min_perimeter: float
    ratio_bound_value: float
    eg_bound: Fraction
    imbalance: Fraction


def boundary_cell_bound(perimeter, eps) -> float:
    """Max number of epsilon-cells a curve of the given length can meet.

    E(p, eps) = sqrt(2) * p / eps + 2 * pi.  Grows linearly in the
    perimeter and in the resolution 1/eps.
    """
    p = float(perimeter)
    epsf = float(eps)
    if not (math.isfinite(p) and p > 0):
        raise ValueError(f"perimeter must be positive, got {perimeter}")
    if not (math.isfinite(epsf) and 0 < epsf <= 1):
        raise ValueError(f"eps must be in (0, 1], got {eps}")
    return math.sqrt(2.0) * p / epsf + 2.0 * math.pi


def min_perimeter_F(delta, k: int) -> float:
    """Perimeter floor F = sqrt((1 - delta) / (2k)) for a conforming district.

    A district within the balance band holds at least (1-delta)/(2k) of the
    unit square's area (floor(P/k) voters spread uniformly), and the
    isoperimetric inequality for subsets of the square turns that area into
    a boundary length.
    """
    d = float(delta)
    if not 0 <= d < 1:
        raise ValueError(f"delta must be in [0, 1), got {delta}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return math.sqrt((1.0 - d) / (2.0 * k))


def ratio_bound(F: float, C: float, eps: float) -> float:
    """Certified floor on a conforming district's minority:majority ratio.

    (F^2 - C*F*sqrt(2)*eps - 2*C*pi*eps^2) / (F^2 + C*F*sqrt(2)*eps +
    2*C*pi*eps^2).  Approaches 1 as eps -> 0; a nonpositive value means the
    resolution is too coarse to certify anything.
    """
    if F <= 0 or C <= 0 or eps <= 0:
        raise ValueError("F, C, eps must all be positive")
    drift = C * F * math.sqrt(2.0) * eps + 2.0 * C * math.pi * eps * eps
    return (F * F - drift) / (F * F + drift)


def eg_lower_bound(gamma) -> Fraction:
    """Efficiency gap ceiling (2*gamma - 1) / (2 - gamma) for an A-sweep.

    When every district goes to A with a B:A ratio of at least 1 - gamma,
    the efficiency gap sits at or below this (negative) value.  Exact
    rational; float inputs are read at their printed decimal value.
    """
    g = as_fraction(gamma)
    if not 0 < g <= 1:
        raise ValueError(f"gamma must be in (0, 1], got {gamma}")
    return (2 * g - 1) / (2 - g)


def vote_imbalance(gamma) -> Fraction:
    """Statewide vote imbalance gamma / (2 - gamma) of the striped electorate.

    With per-square shares a/l^2 and b/l^2 = (1-gamma) * a/l^2, the
    statewide margin (a-b)/(a+b) collapses to this.  Exact rational.
    """
    g = as_fraction(gamma)
    if not 0 < g <= 1:
        raise ValueError(f"gamma must be in (0, 1], got {gamma}")
    return g / (2 - g)


def construct_witness(params: TheoremParams) -> WitnessConfig:
    """Pick a striped electorate whose margins certify the impossibility.

    Two requirements drive gamma: the A-sweep efficiency gap must clear
    1/2 - alpha, which needs gamma < 4*alpha/(3 + 2*alpha), and the
    statewide imbalance must stay below beta, which needs
    gamma < 2*beta/(1 + beta).  Taking half the binding value leaves both
    margins strict.  The stripe is realized with the smallest odd l >= 3
    whose pattern gamma = 2/(l^2 + 1) fits, then the lattice is refined
    (smallest n) until ratio_bound clears b/a, so every conforming district
    is certifiably A-majority.
    """
    alpha = as_fraction(params.alpha)
    beta = as_fraction(params.beta)
    gamma_eg = 4 * alpha / (3 + 2 * alpha)
    gamma_imb = 2 * beta / (1 + beta)
    gamma_target = min(gamma_eg, gamma_imb) / 2

    l = 3
    while Fraction(2, l * l + 1) > gamma_target:
        l += 2
        if l > 10_001:
            raise InfeasibleError("no workable stripe pattern below l = 10001")
    a = (l * l + 1) // 2
    b = (l * l - 1) // 2
    gamma = Fraction(2, l * l + 1)
    ratio_needed = float(Fraction(b, a)) + FLOAT_SLACK

    F = min_perimeter_F(params.delta, params.k)
    C = params.compactness_c
    n = 1
    while ratio_bound(F, C, 1.0 / n) < ratio_needed:
        n *= 2
        if n > 2**40:
            raise InfeasibleError(
                "ratio bound cannot certify these parameters at any sane resolution"
            )
    lo, hi = n // 2, n  # bound holds at hi, fails at or below lo (or lo == 0)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ratio_bound(F, C, 1.0 / mid) >= ratio_needed:
            hi = mid
        else:
            lo = mid
    n = hi

    return WitnessConfig(
        n=n,
        l=l,
        a=a,
        b=b,
        gamma=gamma,
        eps=Fraction(1, n),
        min_perimeter=F,
        ratio_bound_value=ratio_bound(F, C, 1.0 / n),
        eg_bound=eg_lower_bound(gamma),
        imbalance=vote_imbalance(gamma),
    )


def witness_electorate(w: WitnessConfig) -> Electorate:
    """Materialize the witness recipe as an electorate."""
    return generate_lattice_electorate(LatticeParams(n=w.n, l=w.l, a=w.a, b=w.b))


@dataclass(frozen=True)
class CertificationReport:
    """Outcome of checking a plan against a witness.

    ``applicable`` records whether the plan meets (i) and (ii); only then
    does the theorem promise anything.  ``certified`` means the promised
    violation of (iii) was confirmed on the actual tallies: an A sweep, an
    efficiency gap at least 1/2 - alpha in magnitude (and at or below the
    predicted ceiling), under a statewide imbalance below beta.
    """

    witness: WitnessConfig
    params: TheoremParams
    balance: DesideratumResult
    compactness: DesideratumResult
    applicable: bool
    seats_a: int
    seats_b: int
    ties: int
    a_sweep: bool
    eg: Fraction
    eg_magnitude_ok: bool
    eg_within_predicted: bool
    imbalance: Fraction
    imbalance_ok: bool
    certified: bool
    verdict: str


def verify_witness(
    w: WitnessConfig, params: TheoremParams, plan: CellPartition, e: Electorate
) -> CertificationReport:
    """Certify that a conforming plan on the witness electorate breaks (iii).

    The electorate must be the witness's own lattice.  Requirements (i) and
    (ii) are evaluated exactly at the theorem's thresholds; if either fails
    the report is marked not applicable (the theorem constrains only
    conforming plans).  Otherwise the realized seats, efficiency gap, and
    imbalance are checked against the certified margins.
    """
    expected = LatticeParams(n=w.n, l=w.l, a=w.a, b=w.b)
    if e.lattice != expected:
        raise ElectorateError(
            f"electorate does not match the witness lattice {expected}"
        )
    problems = validate_partition(plan)
    if problems:
        raise InvalidPartitionError("; ".join(problems))
    if plan.k != params.k:
        raise InvalidPartitionError(
            f"plan has {plan.k} districts but the theorem instance fixes k = {params.k}"
        )

    desiderata = check_desiderata(e, plan, params.desiderata())
    balance, compactness = desiderata.balance, desiderata.compactness
    applicable = balance.passed and compactness.passed

    tallies = district_tallies(e, plan)
    seats_a = sum(1 for t in tallies if t.winner == "A")
    seats_b = sum(1 for t in tallies if t.winner == "B")
    ties = plan.k - seats_a - seats_b
    a_sweep = seats_a == plan.k
    eg = efficiency_gap(e, plan)
    alpha = as_fraction(params.alpha)
    eg_magnitude_ok = abs(eg) >= Fraction(1, 2) - alpha
    eg_within_predicted = eg <= w.eg_bound
    imbalance = Fraction(abs(e.a_count - e.b_count), e.total)
    imbalance_ok = imbalance < as_fraction(params.beta)

    certified = (
        applicable
        and a_sweep
        and eg_magnitude_ok
        and eg_within_predicted
        and imbalance_ok
    )
    if certified:
        verdict = (
            f"certified: plan meets (i) and (ii) yet A sweeps {seats_a}/{plan.k} "
            f"districts with EG = {float(eg):.4f} (|EG| >= {float(Fraction(1,2)-alpha):.4f}) "
            f"at imbalance {float(imbalance):.4f} < {params.beta}; (iii) is violated"
        )
    elif not applicable:
        which = "balance" if not balance.passed else "compactness"
        verdict = f"not applicable: plan fails ({which}); the theorem makes no claim"
    else:
        verdict = "conforming plan did NOT show the certified violation; soundness bug"
    return CertificationReport(
        witness=w,
        params=params,
        balance=balance,
        compactness=compactness,
        applicable=applicable,
        seats_a=seats_a,
        seats_b=seats_b,
        ties=ties,
        a_sweep=a_sweep,
        eg=eg,
        eg_magnitude_ok=eg_magnitude_ok,
        eg_within_predicted=eg_within_predicted,
        imbalance=imbalance,
        imbalance_ok=imbalance_ok,
        certified=certified,
        verdict=verdict,
    )


@dataclass(frozen=True)
class OracleSummary:
    """Exhaustive-search ground truth on a toy instance.

    counterexamples counts surviving plans (those meeting (i) and (ii)) that
    nevertheless satisfy (iii), which a sound impossibility instance must
    leave at zero.  b_majority_survivors counts survivors containing any
    B-majority district.
    """

    g: int
    k: int
    assignments: int
    valid_partitions: int
    survivors: int
    a_sweep_survivors: int
    min_abs_eg: Fraction | None
    best_assignment: tuple[int, ...] | None
    b_majority_survivors: int
    counterexamples: int
    imbalance: Fraction


def brute_force_oracle(
    e: Electorate, g: int, k: int, params: TheoremParams
) -> OracleSummary:
    """Replay the impossibility claim by enumerating every assignment.

    Walks all k^(g^2) assignments (capped at 10^7), keeps valid partitions,
    filters by (i) at delta and (ii) at compactness_c, and reports the
    minimum |EG| among survivors plus any B-majority district or
    (iii)-satisfying survivor.  Every quantity here is recomputed from
    scratch on purpose: cells are located by direct coordinate arithmetic,
    perimeters by edge counting, wasted votes inline, so this path shares
    no code with the grid or metrics modules it cross-checks.
    """
    cells = g * g
    total_assignments = k**cells
    if total_assignments > 10_000_000:
        raise InfeasibleError(
            f"{k}^{cells} assignments exceed the 10^7 enumeration cap"
        )
    if e.total == 0:
        raise ElectorateError("oracle needs a nonempty electorate")

    # Own histogram: locate each voter by pure rational arithmetic.
    hist_a = [0] * cells
    hist_b = [0] * cells
    for points, hist in ((e.a_points, hist_a), (e.b_points, hist_b)):
        for x, y in points:
            col = min((x.numerator * g) // x.denominator, g - 1)
            row = min((y.numerator * g) // y.denominator, g - 1)
            hist[row * g + col] += 1
    pop = [ha + hb for ha, hb in zip(hist_a, hist_b)]
    total = sum(pop)

    delta = as_fraction(params.delta)
    c_exact = as_fraction(params.compactness_c)
    lo_band = (1 - delta) * (total // k)
    hi_band = (1 + delta) * (-(-total // k))
    alpha_bound = Fraction(1, 2) - as_fraction(params.alpha)
    imbalance = Fraction(abs(e.a_count - e.b_count), total)
    iii_conditional = imbalance < as_fraction(params.beta)

    neighbors: list[list[int]] = []
    for idx in range(cells):
        r, c = divmod(idx, g)
        nbrs = []
        if r > 0:
            nbrs.append(idx - g)
        if r < g - 1:
            nbrs.append(idx + g)
        if c > 0:
            nbrs.append(idx - 1)
        if c < g - 1:
            nbrs.append(idx + 1)
        neighbors.append(nbrs)

    valid = survivors = a_sweeps = b_majority = counterexamples = 0
    min_abs_eg: Fraction | None = None
    best: tuple[int, ...] | None = None

    for assign in product(range(1, k + 1), repeat=cells):
        if any(assign.count(d) == 0 for d in range(1, k + 1)):
            continue
        valid += 1
        pops = [0] * (k + 1)
        votes_a = [0] * (k + 1)
        for idx in range(cells):
            d = assign[idx]
            pops[d] += pop[idx]
            votes_a[d] += hist_a[idx]
        if any(not lo_band <= pops[d] <= hi_band for d in range(1, k + 1)):
            continue
        # Perimeter in edge units: p_cells/g squared vs C * m/g^2 reduces to
        # edge_count^2 <= C * cell_count.
        compact = True
        for d in range(1, k + 1):
            edges = 0
            m = 0
            for idx in range(cells):
                if assign[idx] != d:
                    continue
                m += 1
                edges += 4 - len(neighbors[idx])
                edges += sum(1 for nb in neighbors[idx] if assign[nb] != d)
            if edges * edges > c_exact * m:
                compact = False
                break
        if not compact:
            continue
        survivors += 1
        waste_diff = 0
        has_b_major = False
        a_wins = 0
        for d in range(1, k + 1):
            p_d = pops[d]
            a_d = votes_a[d]
            b_d = p_d - a_d
            need = (p_d + 1) // 2
            if a_d > b_d:
                wa, wb = a_d - need, b_d
                a_wins += 1
            elif b_d > a_d:
                wa, wb = a_d, b_d - need
                has_b_major = True
            else:
                wa, wb = a_d, b_d
            waste_diff += wa - wb
        eg = Fraction(waste_diff, total)
        if a_wins == k:
            a_sweeps += 1
        if has_b_major:
            b_majority += 1
        if iii_conditional and abs(eg) < alpha_bound:
            counterexamples += 1
        if min_abs_eg is None or abs(eg) < min_abs_eg:
            min_abs_eg = abs(eg)
            best = assign

    return OracleSummary(
        g=g,
        k=k,
        assignments=total_assignments,
        valid_partitions=valid,
        survivors=survivors,
        a_sweep_survivors=a_sweeps,
        min_abs_eg=min_abs_eg,
        best_assignment=best,
        b_majority_survivors=b_majority,
        counterexamples=counterexamples,
        imbalance=imbalance,
    )
