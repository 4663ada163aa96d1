"""gerrylab: a redistricting laboratory on the unit square.

Voters live at exact rational coordinates; districts are unions of grid
cells.  The package scores plans (efficiency gap, Polsby-Popper
compactness, population balance), districts electorates (shortest
splitline, simulated annealing), and constructs certified witnesses showing
the three fairness requirements cannot always coexist.
"""

from .anneal import AnnealConfig, AnnealResult, ParetoPoint, anneal, pareto_sweep
from .certifier import (
    CertificationReport,
    OracleSummary,
    TheoremParams,
    WitnessConfig,
    boundary_cell_bound,
    brute_force_oracle,
    construct_witness,
    eg_lower_bound,
    min_perimeter_F,
    ratio_bound,
    verify_witness,
    vote_imbalance,
    witness_electorate,
)
from .electorate import (
    Electorate,
    LatticeParams,
    Rect,
    count_in_district,
    generate_lattice_electorate,
    load_electorate,
    party_cell_counts,
    repaint_region,
    save_electorate,
)
from .errors import (
    ElectorateError,
    FileFormatError,
    GerrylabError,
    InfeasibleError,
    InvalidPartitionError,
    UnknownDistrictError,
)
from .fileio import load_plan, render_report, report_to_dict, save_plan
from .grid import (
    CellPartition,
    DistrictShape,
    district_cells,
    district_shape,
    is_connected,
    polsby_popper,
    polsby_popper_pi_coeff,
    validate_partition,
)
from .metrics import (
    DesiderataParams,
    DesiderataReport,
    DistrictTally,
    PlanReport,
    check_desiderata,
    district_tallies,
    efficiency_gap,
    plan_report,
    population_balance_delta,
    seats,
    simplified_eg,
    wasted_votes,
)
from .splitline import SplitlineConfig, rasterize_cut, shortest_splitline

__version__ = "0.1.0"
