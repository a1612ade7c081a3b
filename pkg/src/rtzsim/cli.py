"""Command-line entry point: ``rtzsim <command> [options]``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    CycleStyle,
    analytic_cycle_time,
    carry_chain_stats,
    classify_indication,
    compute_timing_slack,
    critical_path_elements,
    detect_orphans,
    forced_chain_operands,
    load_table2,
    load_table4,
    measure_latencies,
    reproduce_table4,
)
from .analysis.timing import ns
from .builders import FullAdderKind, build_completion_detector, build_full_adder, build_rca
from .cells import load_delays
from .errors import DomainError, ParseError, RangeError, RtzSimError, TooManyInputs, UnsupportedKind
from .fileio import emit_netlist, parse_netlist_file
from .netlist import validate_netlist
from .sim import ENGINES, RtMode, RtPolicy, check_relative_timing, run_transactions, simulate

EXIT_OK, EXIT_FINDINGS, EXIT_USAGE = 0, 1, 2

ADDERS = [k.value for k in FullAdderKind]


class UsageError(Exception):
    pass


def _write(args, text: str) -> None:
    if getattr(args, "out", None) and args.out != "-":
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _rt(args) -> RtPolicy:
    return RtPolicy(RtMode(args.rt), args.rt_pad)


def _operands(args, width: int) -> list[tuple[int, int, int]]:
    if args.ops:
        out = []
        for text in args.ops:
            try:
                a, b, c = (int(x, 0) for x in text.split(","))
            except ValueError:
                raise UsageError(f"--op expects a,b,cin (got {text!r})") from None
            out.append((a, b, c))
        return out
    if args.vectors == "exhaustive":
        if width > 6:
            raise UsageError("exhaustive vectors limited to width <= 6")
        one = [(a, b, c) for a in range(2**width) for b in range(2**width) for c in (0, 1)]
        return one * args.rounds
    if args.vectors == "chain":
        if args.chain is None:
            raise UsageError("--vectors chain needs --chain M")
        return [forced_chain_operands(width, args.chain)] * args.rounds
    if args.seed is None:
        raise UsageError("--vectors random needs --seed")
    rng = np.random.default_rng(args.seed)
    hi = 2**width
    return [(int(rng.integers(hi)), int(rng.integers(hi)), int(rng.integers(2)))
            for _ in range(args.count)]


def _load_netlist(args):
    if args.netlist:
        net = parse_netlist_file(args.netlist)
        rep = validate_netlist(net)
        if not rep.ok:
            raise ParseError("; ".join(f"{v.kind}: {v.detail}" for v in rep.violations),
                             source=args.netlist)
        return net
    if not args.adder:
        raise UsageError("give --adder or --netlist")
    return build_full_adder(args.adder)


# --- commands ---------------------------------------------------------------

def cmd_build(args):
    if args.part == "cd":
        net = build_completion_detector(args.width)
    elif args.part == "fa":
        net = build_full_adder(args.adder)
    else:
        system = build_rca(args.width, args.adder)
        net = system.rca if args.part == "rca" else system.netlist
    rep = validate_netlist(net)
    _write(args, emit_netlist(net))
    if not rep.ok:
        for v in rep.violations:
            print(f"{v.kind}: {v.detail}", file=sys.stderr)
        return EXIT_FINDINGS if args.strict else EXIT_OK
    return EXIT_OK


def _read_stimuli(path):
    out = []
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) != 3:
            raise ParseError("expected 't wire value'", source=str(path), line=n)
        try:
            out.append((int(line[0]), line[1], int(line[2])))
        except ValueError:
            raise ParseError("time and value must be integers", source=str(path), line=n) from None
    return out


def cmd_sim(args):
    delays = load_delays(args.delays)
    if args.netlist:
        if not args.stimuli:
            raise UsageError("--netlist simulation needs --stimuli")
        trace = simulate(_load_netlist(args), _read_stimuli(args.stimuli), delays, _rt(args),
                         engine=args.engine)
        report = {"events": len(trace.events), "end_ps": trace.events[-1].time if trace.events else 0}
        violations = []
    else:
        if not args.adder:
            raise UsageError("give --adder or --netlist")
        system = build_rca(args.width, args.adder)
        ops = _operands(args, args.width)
        trace, records = run_transactions(system, ops, delays, _rt(args), engine=args.engine)
        timing = measure_latencies(records)
        violations = check_relative_timing(trace, system) if args.rt != "off" else []
        wrong = [r.txn for r in records if (r.sum + (r.cout << args.width)) != r.a + r.b + r.cin]
        report = {
            "adder": system.kind.value, "width": args.width, "delays": delays.name, "rt": args.rt,
            "transactions": len(records), "events": len(trace.events),
            "timing": timing.as_dict(), "wrong_results": wrong,
            "rt_violations": len(violations), "rt_violation_details": [str(v) for v in violations],
        }
    if args.trace:
        Path(args.trace).write_text(trace.to_jsonl())
    if args.vcd:
        Path(args.vcd).write_text(trace.to_vcd())
    _write(args, _dump(report))
    findings = bool(violations) or bool(report.get("wrong_results"))
    return EXIT_FINDINGS if args.strict and findings else EXIT_OK


def cmd_classify(args):
    net = _load_netlist(args)
    cls = classify_indication(net, load_delays(args.delays))
    _write(args, _dump({"netlist": net.name, **cls.as_dict()}))
    return EXIT_OK


def cmd_orphans(args):
    delays = load_delays(args.delays)
    system = build_rca(args.width, args.adder)
    ops = _operands(args, args.width)
    trace, records = run_transactions(system, ops, delays, _rt(args), engine=args.engine)
    rep = detect_orphans(trace, system, relative_timing=not args.no_rt_sinks)
    violations = check_relative_timing(trace, system)
    out = {"adder": system.kind.value, "width": args.width, "delays": delays.name,
           "transactions": len(records), "orphans": len(rep),
           "gate_orphans": sum(o.kind == "gate" for o in rep.orphans),
           "wire_orphans": sum(o.kind == "wire" for o in rep.orphans),
           "rt_violations": len(violations),
           "details": [o.as_dict() for o in rep.orphans]}
    _write(args, _dump(out))
    return EXIT_FINDINGS if args.strict and (rep or violations) else EXIT_OK


def cmd_slack(args):
    delays = load_delays(args.delays)
    rep = compute_timing_slack(FullAdderKind.parse(args.adder), delays)
    out = rep.as_dict()
    out["delays"] = delays.name
    out["slack_ns"] = ns(rep.slack_ps / 1000, 3)
    out["critical_path"] = [k.name for k in critical_path_elements(rep.kind, delays)]
    _write(args, _dump(out))
    return EXIT_OK


def cmd_cycle_model(args):
    r = analytic_cycle_time(CycleStyle(args.style), args.n, args.m, args.t_fa)
    _write(args, _dump({"style": args.style, "n": args.n, "m": args.m, "t_fa_ns": args.t_fa,
                        **{f"{k}_ns": ns(v) for k, v in r.items()}}))
    return EXIT_OK


def cmd_table4(args):
    t2 = load_table2(args.data) if args.data else None
    pub = load_table4(args.published) if args.published else None
    tab = reproduce_table4(t2, pub, width=args.n)
    _write(args, tab.to_csv())
    worst = tab.max_abs_delta() if any(r.published for r in tab.rows) else 0.0
    print(f"cells={tab.cells()} max_abs_delta_ns={worst:.4f}", file=sys.stderr)
    return EXIT_FINDINGS if args.strict and worst > 0.01 else EXIT_OK


def cmd_carry_stats(args):
    st = carry_chain_stats(args.width, args.samples, args.seed, args.workers)
    _write(args, st.to_csv())
    summary = {"width": st.width, "samples": st.samples, "seed": st.seed,
               "mean": round(st.mean, 4), "propagate_run_mean": round(st.propagate_mean, 4),
               "fraction_le_4": round(st.fraction_le(min(4, st.width)), 4),
               "fraction_le_8": round(st.fraction_le(min(8, st.width)), 4)}
    print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return EXIT_OK


def cmd_validate(args):
    net = parse_netlist_file(args.netlist)
    rep = validate_netlist(net)
    out = {"netlist": net.name, "ok": rep.ok, "gates": len(net.gates),
           "inventory": {k.name: n for k, n in sorted(net.inventory().items(), key=lambda kv: kv[0].name)},
           "violations": [{"kind": v.kind, "detail": v.detail} for v in rep.violations]}
    _write(args, _dump(out))
    return EXIT_FINDINGS if args.strict and not rep.ok else EXIT_OK


# --- parser -----------------------------------------------------------------

def _common(p):
    p.add_argument("-o", "--out", help="output file (default stdout)")
    p.add_argument("--strict", action="store_true", help="exit 1 when the analysis finds problems")


def _adder(p, required=True):
    p.add_argument("--adder", choices=ADDERS, required=required)


def _vectors(p):
    p.add_argument("--vectors", choices=["exhaustive", "random", "chain"], default="exhaustive")
    p.add_argument("--op", dest="ops", action="append", metavar="A,B,CIN",
                   help="explicit transaction (repeatable); overrides --vectors")
    p.add_argument("--rounds", type=int, default=1, help="repeat exhaustive/chain vectors")
    p.add_argument("--count", type=int, default=1000, help="random transactions")
    p.add_argument("--seed", type=int, help="required for random vectors")
    p.add_argument("--chain", type=int, help="forced carry chain length for --vectors chain")


def _timing(p):
    p.add_argument("--delays", default="default",
                   help="default, uniform, seitz-slack, adversarial or a config path")
    p.add_argument("--rt", choices=[m.value for m in RtMode], default="off")
    p.add_argument("--rt-pad", type=int, help="padding in ps for --rt enforce")
    p.add_argument("--engine", choices=ENGINES, default="compiled",
                   help="compiled event loop or the pure-Python reference loop")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rtzsim", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--data-dir", help="override bundled data (same as RTZSIM_DATA_DIR)")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("build", help="emit a netlist as JSON")
    _adder(p, required=False)
    p.add_argument("--width", type=int, default=1)
    p.add_argument("--part", choices=["system", "rca", "fa", "cd"], default="system")
    _common(p)
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("sim", help="simulate handshake transactions or a stimulus file")
    _adder(p, required=False)
    p.add_argument("--width", type=int, default=1)
    p.add_argument("--netlist")
    p.add_argument("--stimuli", help="lines of 't wire value' (with --netlist)")
    _vectors(p)
    _timing(p)
    p.add_argument("--trace", help="write the event trace as JSON lines")
    p.add_argument("--vcd", help="write the event trace as VCD")
    _common(p)
    p.set_defaults(fn=cmd_sim)

    p = sub.add_parser("classify", help="indication class of a netlist")
    _adder(p, required=False)
    p.add_argument("--netlist")
    p.add_argument("--delays", default="default")
    _common(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("orphans", help="find unacknowledged transitions in an RCA")
    _adder(p)
    p.add_argument("--width", type=int, default=2)
    p.add_argument("--no-rt-sinks", action="store_true",
                   help="do not credit carry resets that beat the sum reset")
    _vectors(p)
    _timing(p)
    _common(p)
    p.set_defaults(fn=cmd_orphans)

    p = sub.add_parser("slack", help="timing slack of the carry-before-sum reset assumption")
    p.add_argument("--adder", choices=[a for a in ADDERS if a != "seitz-weak"], required=True)
    p.add_argument("--delays", default="default")
    _common(p)
    p.set_defaults(fn=cmd_slack)

    p = sub.add_parser("cycle-model", help="analytic forward/reverse/cycle time")
    p.add_argument("--style", choices=[s.value for s in CycleStyle], required=True,
                   type=lambda x: x.upper().replace("-", "_"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--t-fa", type=float, required=True, help="full adder delay in ns")
    _common(p)
    p.set_defaults(fn=cmd_cycle_model)

    p = sub.add_parser("table4", help="cycle-time table for chain lengths 4/8/16/32")
    p.add_argument("--data", help="latency CSV (default: bundled)")
    p.add_argument("--published", help="reference cycle-time CSV for the delta columns")
    p.add_argument("--n", type=int, default=32)
    _common(p)
    p.set_defaults(fn=cmd_table4)

    p = sub.add_parser("carry-stats", help="Monte Carlo longest carry chain statistics")
    p.add_argument("--width", type=int, default=32)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    _common(p)
    p.set_defaults(fn=cmd_carry_stats)

    p = sub.add_parser("validate", help="check a netlist file")
    p.add_argument("netlist")
    _common(p)
    p.set_defaults(fn=cmd_validate)
    return ap


def run_command(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    saved = os.environ.get("RTZSIM_DATA_DIR")
    if args.data_dir:
        os.environ["RTZSIM_DATA_DIR"] = args.data_dir
    try:
        return _dispatch(args)
    finally:
        if saved is None:
            os.environ.pop("RTZSIM_DATA_DIR", None)
        else:
            os.environ["RTZSIM_DATA_DIR"] = saved


def _dispatch(args) -> int:
    if getattr(args, "command", None) in ("build",) and args.part != "cd" and not args.adder:
        print("rtzsim: error: build needs --adder", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.fn(args)
    except (UsageError, ParseError, FileNotFoundError,
            RangeError, DomainError, UnsupportedKind, TooManyInputs) as e:
        print(f"rtzsim: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except RtzSimError as e:
        # oscillation or a stalled handshake is a finding about the circuit
        print(f"rtzsim: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FINDINGS


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
