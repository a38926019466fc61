"""Toggle-activity profiling and activity-weighted LUT mapping for AIG netlists.

The flow: parse a netlist (ASCII AIGER or BLIF), simulate it cycle by
cycle while counting per-bit value changes with saturating counters,
serialize the counters as a canonical text dump, then run priority-cuts
K-LUT mapping either unweighted or with the per-net activity factor
applied to the area cost, and compare the two mappings.
"""

__version__ = "0.1.0"

from .aiger import parse_aiger
from .blif import emit_blif, parse_blif
from .dump import (
    COUNTER_MAX,
    ActivityDump,
    BindResult,
    DumpEntry,
    bind_to_netlist,
    dumps,
    loads,
    make_dump,
    merge,
)
from .equiv import EquivResult, functionally_equivalent
from .errors import (
    CycleError,
    DumpFormatError,
    EmitError,
    LutflowError,
    NetlistError,
    ParseError,
    StimulusError,
)
from .mapper import (
    COST_MODES,
    COST_SIMOPT,
    COST_VANILLA,
    Cut,
    MapMetrics,
    MapParams,
    cut_area_cost,
    depth_metrics,
    enumerate_cuts,
    mapping_area,
    rank_cuts,
    scale_factor,
    select_mapping,
    weighted_area_cost,
)
from .netlist import (
    BusGroup,
    Latch,
    Lut,
    MappedNetlist,
    Netlist,
    as_lut_network,
    flat_names,
    group_buses,
    lit_is_neg,
    lit_net,
    lit_not,
    make_lit,
)
from .sim import (
    OverheadReport,
    SimConfig,
    SimState,
    Tracker,
    build_trackers,
    load_stimulus,
    mask_and_increment,
    measure_overhead,
    oracle_simulate,
    run_simulation,
    simulate_cycle,
    simulate_plain,
)

__all__ = [
    "__version__",
    "parse_aiger",
    "parse_blif",
    "emit_blif",
    "ActivityDump",
    "DumpEntry",
    "BindResult",
    "COUNTER_MAX",
    "dumps",
    "loads",
    "make_dump",
    "merge",
    "bind_to_netlist",
    "EquivResult",
    "functionally_equivalent",
    "LutflowError",
    "NetlistError",
    "CycleError",
    "ParseError",
    "StimulusError",
    "DumpFormatError",
    "EmitError",
    "COST_MODES",
    "COST_VANILLA",
    "COST_SIMOPT",
    "Cut",
    "MapParams",
    "MapMetrics",
    "cut_area_cost",
    "scale_factor",
    "weighted_area_cost",
    "rank_cuts",
    "enumerate_cuts",
    "select_mapping",
    "mapping_area",
    "depth_metrics",
    "Netlist",
    "MappedNetlist",
    "Latch",
    "Lut",
    "BusGroup",
    "as_lut_network",
    "flat_names",
    "group_buses",
    "make_lit",
    "lit_net",
    "lit_is_neg",
    "lit_not",
    "SimConfig",
    "SimState",
    "Tracker",
    "build_trackers",
    "mask_and_increment",
    "simulate_cycle",
    "run_simulation",
    "oracle_simulate",
    "simulate_plain",
    "load_stimulus",
    "measure_overhead",
    "OverheadReport",
]
