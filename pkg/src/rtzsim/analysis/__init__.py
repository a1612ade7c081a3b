from .carry import ChainStats, carry_chain_stats, exhaustive_chain_distribution, trace_chain_distribution
from .indication import Indication, IndicationClass, classify_indication
from .oracle import FULL_ADDER_EQUATIONS, check_disjoint_products, oracle_add, rail_cube
from .orphans import Orphan, OrphanReport, acknowledgement_edges, detect_orphans
from .timing import (
    CHAIN_LENGTHS,
    CycleStyle,
    CycleTable,
    SlackReport,
    TimingReport,
    analytic_cycle_time,
    compute_timing_slack,
    critical_path_elements,
    forced_chain_operands,
    load_table2,
    load_table3,
    load_table4,
    measure_latencies,
    measure_slack_by_simulation,
    reproduce_table4,
)

__all__ = [
    "CHAIN_LENGTHS", "ChainStats", "CycleStyle", "CycleTable", "FULL_ADDER_EQUATIONS",
    "Indication", "IndicationClass", "Orphan", "OrphanReport", "SlackReport", "TimingReport",
    "acknowledgement_edges", "analytic_cycle_time", "carry_chain_stats", "check_disjoint_products",
    "classify_indication", "compute_timing_slack", "critical_path_elements", "detect_orphans",
    "exhaustive_chain_distribution", "forced_chain_operands", "load_table2", "load_table3",
    "load_table4", "measure_latencies", "measure_slack_by_simulation", "oracle_add", "rail_cube", "reproduce_table4",
    "trace_chain_distribution",
]
