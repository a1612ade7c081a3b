"""Gate-level simulation and analysis of dual-rail return-to-zero adders."""

__version__ = "0.1.0"

from .builders import (  # noqa: E402
    AdderSystem,
    FullAdderKind,
    build_completion_detector,
    build_full_adder,
    build_handshake_system,
    build_rca,
)
from .cells import DelayModel, calibrate_delays, default_delays, eval_gate, load_delays  # noqa: E402
from .netlist import (  # noqa: E402
    SPACER,
    Gate,
    GateKind,
    Netlist,
    Port,
    dual_rail_decode,
    dual_rail_encode,
    validate_netlist,
)
from .sim import RtMode, RtPolicy, Simulator, check_relative_timing, run_transactions, simulate  # noqa: E402

__all__ = [
    "SPACER", "AdderSystem", "DelayModel", "FullAdderKind", "Gate", "GateKind", "Netlist", "Port",
    "RtMode", "RtPolicy", "Simulator", "build_completion_detector", "build_full_adder",
    "build_handshake_system", "build_rca", "calibrate_delays", "check_relative_timing",
    "default_delays", "dual_rail_decode", "dual_rail_encode", "eval_gate", "load_delays",
    "run_transactions", "simulate", "validate_netlist",
]
