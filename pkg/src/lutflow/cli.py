"""Command-line flow driver: simulate, map, compare, bench.

Exit codes: 1 netlist parse error, 2 stimulus/config error, 3 I/O error,
4 dump format error, 5 mapped-netlist equivalence failure. Outputs land
only in the directory given by --out; every run writes a manifest that
echoes the configuration. Wall-clock timings go to stdout and
timings.txt, which is the one output file that differs between re-runs.
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .aiger import parse_aiger
from .blif import emit_blif, parse_blif
from .dump import ActivityDump, BindResult, bind_to_netlist, dumps, loads
from .equiv import EquivResult, functionally_equivalent
from .errors import DumpFormatError, LutflowError, ParseError, StimulusError
from .mapper import (
    COST_MODES,
    COST_SIMOPT,
    COST_VANILLA,
    MapMetrics,
    MapParams,
    depth_metrics,
    select_mapping,
)
from .netlist import Netlist
from .sim import SimConfig, run_simulation, simulate_plain

EXIT_PARSE = 1
EXIT_STIMULUS = 2
EXIT_IO = 3
EXIT_DUMP = 4
EXIT_EQUIV = 5


def _design_name(path: Path) -> str:
    stem = re.sub(r"\s+", "_", path.stem)
    return stem or "top"


def _load_netlist(path_str: str, fmt: str) -> Netlist:
    path = Path(path_str)
    data = path.read_bytes()
    if fmt == "aiger":
        return parse_aiger(data, name=_design_name(path))
    return parse_blif(data)


def _validate_config(args) -> list[str]:
    problems = []
    if getattr(args, "cycles", 1) < 1:
        problems.append("--cycles must be >= 1")
    seed = getattr(args, "seed", 0)
    if not 0 <= seed < (1 << 64):
        problems.append("--seed must fit in 64 bits")
    k = getattr(args, "k", 4)
    if not 2 <= k <= 8:
        problems.append("--k must be in 2..8")
    if getattr(args, "priority", 8) < 1:
        problems.append("--priority must be >= 1")
    pct = getattr(args, "hot_percentile", 80.0)
    if not 0 <= pct <= 100:
        problems.append("--hot-percentile must be in 0..100")
    return problems


def _manifest(command: str, args, design: str, extra: list[str] = ()) -> bytes:
    lines = [
        "lutflow-manifest v1",
        f"version {__version__}",
        f"command {command}",
    ]
    source = getattr(args, "aiger", None) or getattr(args, "blif", None)
    if source:
        lines.append(f"input {source}")
        lines.append(f"format {'aiger' if getattr(args, 'aiger', None) else 'blif'}")
    lines.append(f"design {design}")
    if hasattr(args, "cycles"):
        lines.append(f"cycles {args.cycles}")
        lines.append(f"seed {args.seed}")
        lines.append(f"stimulus {args.stimulus or 'random'}")
        for glob in args.track or []:
            lines.append(f"track {glob}")
    if hasattr(args, "k"):
        lines.append(f"k {args.k}")
        lines.append(f"priority {args.priority}")
        lines.append(f"hot_percentile {args.hot_percentile:.6f}")
    lines.extend(extra)
    lines.append(f"out {args.out}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _metrics_bytes(design: str, mode: str, params: MapParams, pct: float, m: MapMetrics) -> bytes:
    lines = [
        "lutflow-metrics v1",
        f"design {design}",
        f"mode {mode}",
        f"k {params.k}",
        f"priority {params.priority}",
        f"hot_percentile {pct:.6f}",
        f"lut_count {m.lut_count}",
        f"max_level {m.max_level}",
        f"hot_depth {m.hot_depth}",
        f"hot_flag {1 if m.hot_flag else 0}",
        f"area_cost {m.area_cost:.6f}",
    ]
    lines.extend(f"output_level {name} {level}" for name, level in m.output_levels)
    return ("\n".join(lines) + "\n").encode("utf-8")


def _delta_pct(vanilla: float, simopt: float) -> float:
    if vanilla == 0:
        return 0.0
    return (vanilla - simopt) / vanilla * 100.0


@dataclass
class CompareOutcome:
    design: str
    dump: ActivityDump
    binding: BindResult
    blifs: dict[str, bytes]
    metrics: dict[str, MapMetrics]
    equivalence: dict[str, EquivResult]
    timings: dict[str, float]

    @property
    def equivalent(self) -> bool:
        return all(bool(r) for r in self.equivalence.values())


def _compare_pipeline(netlist: Netlist, args) -> CompareOutcome:
    cfg = SimConfig(
        cycles=args.cycles, seed=args.seed, track=tuple(args.track or ()), stimulus=args.stimulus
    )
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    dump = run_simulation(netlist, cfg)
    timings["sim_instrumented_seconds"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    simulate_plain(netlist, cfg)
    timings["sim_plain_seconds"] = time.perf_counter() - t0
    plain = timings["sim_plain_seconds"]
    timings["sim_overhead_ratio"] = timings["sim_instrumented_seconds"] / plain if plain > 0 else 1.0

    binding = bind_to_netlist(dump, netlist)
    blifs: dict[str, bytes] = {}
    metrics: dict[str, MapMetrics] = {}
    equivalence: dict[str, EquivResult] = {}
    for mode in COST_MODES:
        params = MapParams(k=args.k, priority=args.priority, mode=mode)
        t0 = time.perf_counter()
        mapped = select_mapping(netlist, params, binding.scores)
        timings[f"map_{mode}_seconds"] = time.perf_counter() - t0
        blifs[mode] = emit_blif(mapped)
        metrics[mode] = depth_metrics(mapped, binding.scores, args.hot_percentile)
        equivalence[mode] = functionally_equivalent(netlist, mapped, seed=args.seed)
    return CompareOutcome(
        design=netlist.name,
        dump=dump,
        binding=binding,
        blifs=blifs,
        metrics=metrics,
        equivalence=equivalence,
        timings=timings,
    )


def _report_bytes(outcome: CompareOutcome, args) -> bytes:
    lines = [
        "lutflow-report v1",
        f"design {outcome.design}",
        f"cycles {args.cycles}",
        f"seed {args.seed}",
        f"k {args.k}",
        f"priority {args.priority}",
        f"hot_percentile {args.hot_percentile:.6f}",
        f"tracked {len(outcome.dump.entries)}",
        f"matched {outcome.binding.matched}",
        f"unmatched {outcome.binding.unmatched}",
    ]
    for mode in COST_MODES:
        m = outcome.metrics[mode]
        lines.append(
            f"row {mode} lut_count {m.lut_count} max_level {m.max_level} "
            f"hot_depth {m.hot_depth} hot_flag {1 if m.hot_flag else 0} "
            f"area_cost {m.area_cost:.6f}"
        )
    mv, ms = outcome.metrics[COST_VANILLA], outcome.metrics[COST_SIMOPT]
    lines.append(f"delta lut_count {_delta_pct(mv.lut_count, ms.lut_count):.6f}")
    lines.append(f"delta max_level {_delta_pct(mv.max_level, ms.max_level):.6f}")
    lines.append(f"delta hot_depth {_delta_pct(mv.hot_depth, ms.hot_depth):.6f}")
    lines.append(f"delta area_cost {_delta_pct(mv.area_cost, ms.area_cost):.6f}")
    for mode in COST_MODES:
        lines.append(f"equivalence {mode} pass")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _timings_bytes(timings: dict[str, float]) -> bytes:
    lines = [f"{key} {value:.6f}" for key, value in timings.items()]
    return ("\n".join(lines) + "\n").encode("utf-8")


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_simulate(args) -> int:
    netlist = _load_netlist(args.aiger or args.blif, "aiger" if args.aiger else "blif")
    cfg = SimConfig(
        cycles=args.cycles, seed=args.seed, track=tuple(args.track or ()), stimulus=args.stimulus
    )
    t0 = time.perf_counter()
    dump = run_simulation(netlist, cfg)
    instrumented = time.perf_counter() - t0
    t0 = time.perf_counter()
    simulate_plain(netlist, cfg)
    plain = time.perf_counter() - t0
    ratio = instrumented / plain if plain > 0 else 1.0

    out = _outdir(args)
    (out / "activity.dump").write_bytes(dumps(dump))
    (out / "manifest.txt").write_bytes(_manifest("simulate", args, netlist.name))
    (out / "timings.txt").write_bytes(
        _timings_bytes(
            {
                "sim_instrumented_seconds": instrumented,
                "sim_plain_seconds": plain,
                "sim_overhead_ratio": ratio,
            }
        )
    )
    clocks = sum(1 for e in dump.entries if e.is_clock)
    print(f"design {netlist.name}: {len(dump.entries)} tracked signals ({clocks} clock)")
    print(f"instrumented {instrumented:.4f}s vs plain {plain:.4f}s (ratio {ratio:.2f}x)")
    print(f"dump written to {out / 'activity.dump'}")
    return 0


def cmd_map(args) -> int:
    netlist = _load_netlist(args.aiger or args.blif, "aiger" if args.aiger else "blif")
    dump = loads(Path(args.dump).read_bytes())
    binding = bind_to_netlist(dump, netlist)
    params = MapParams(k=args.k, priority=args.priority, mode=args.mode)
    mapped = select_mapping(netlist, params, binding.scores)
    metrics = depth_metrics(mapped, binding.scores, args.hot_percentile)

    out = _outdir(args)
    (out / f"{args.mode}.blif").write_bytes(emit_blif(mapped))
    (out / f"{args.mode}.metrics").write_bytes(
        _metrics_bytes(netlist.name, args.mode, params, args.hot_percentile, metrics)
    )
    (out / "manifest.txt").write_bytes(
        _manifest("map", args, netlist.name, [f"mode {args.mode}", f"dump {args.dump}"])
    )
    print(
        f"bound {binding.matched}/{netlist.num_nets} nets from dump "
        f"({binding.unmatched} unmatched, {len(binding.unknown_keys)} unknown keys)"
    )
    print(
        f"{args.mode} mapping: {metrics.lut_count} LUTs, max level {metrics.max_level}, "
        f"area {metrics.area_cost:.6f}"
    )
    return 0


def cmd_compare(args) -> int:
    netlist = _load_netlist(args.aiger or args.blif, "aiger" if args.aiger else "blif")
    outcome = _compare_pipeline(netlist, args)
    if not outcome.equivalent:
        for mode, result in outcome.equivalence.items():
            if not result:
                detail = result.reason or f"counterexample {result.counterexample:#x}"
                print(f"error: {mode} mapping is not equivalent to the source: {detail}",
                      file=sys.stderr)
        return EXIT_EQUIV

    out = _outdir(args)
    (out / "activity.dump").write_bytes(dumps(outcome.dump))
    for mode in COST_MODES:
        (out / f"{mode}.blif").write_bytes(outcome.blifs[mode])
        params = MapParams(k=args.k, priority=args.priority, mode=mode)
        (out / f"{mode}.metrics").write_bytes(
            _metrics_bytes(outcome.design, mode, params, args.hot_percentile, outcome.metrics[mode])
        )
    report = _report_bytes(outcome, args)
    (out / "report.txt").write_bytes(report)
    (out / "manifest.txt").write_bytes(_manifest("compare", args, netlist.name))
    (out / "timings.txt").write_bytes(_timings_bytes(outcome.timings))

    sys.stdout.write(report.decode("utf-8"))
    ratio = outcome.timings["sim_overhead_ratio"]
    print(f"sim overhead ratio {ratio:.2f}x (timings.txt)")
    return 0


def cmd_bench(args) -> int:
    directory = Path(args.circuits)
    if not directory.is_dir():
        raise FileNotFoundError(f"{directory} is not a directory")
    paths = sorted(
        [*directory.glob("*.aag"), *directory.glob("*.blif")], key=lambda p: p.name
    )
    out = _outdir(args)
    rows: list[str] = []
    table: list[str] = []
    for path in paths:
        stem = _design_name(path)
        fmt = "aiger" if path.suffix == ".aag" else "blif"
        sub = out / stem
        try:
            netlist = _load_netlist(str(path), fmt)
            outcome = _compare_pipeline(netlist, args)
        except LutflowError as exc:
            rows.append(f"circuit {stem} status error {type(exc).__name__}")
            table.append(f"{stem:24s} ERROR {exc}")
            continue
        if not outcome.equivalent:
            rows.append(f"circuit {stem} status equivalence-failure")
            table.append(f"{stem:24s} EQUIVALENCE FAILURE")
            continue
        sub.mkdir(parents=True, exist_ok=True)
        (sub / "activity.dump").write_bytes(dumps(outcome.dump))
        for mode in COST_MODES:
            (sub / f"{mode}.blif").write_bytes(outcome.blifs[mode])
        (sub / "report.txt").write_bytes(_report_bytes(outcome, args))
        (sub / "timings.txt").write_bytes(_timings_bytes(outcome.timings))
        mv, ms = outcome.metrics[COST_VANILLA], outcome.metrics[COST_SIMOPT]
        rows.append(
            f"circuit {stem} status ok "
            f"lut_vanilla {mv.lut_count} lut_simopt {ms.lut_count} "
            f"lut_delta_pct {_delta_pct(mv.lut_count, ms.lut_count):.6f} "
            f"level_vanilla {mv.max_level} level_simopt {ms.max_level} "
            f"level_delta_pct {_delta_pct(mv.max_level, ms.max_level):.6f} "
            f"hot_vanilla {mv.hot_depth} hot_simopt {ms.hot_depth} "
            f"hot_delta_pct {_delta_pct(mv.hot_depth, ms.hot_depth):.6f} "
            f"area_vanilla {mv.area_cost:.6f} area_simopt {ms.area_cost:.6f} "
            f"area_delta_pct {_delta_pct(mv.area_cost, ms.area_cost):.6f}"
        )
        table.append(
            f"{stem:24s} luts {mv.lut_count:>5d}/{ms.lut_count:<5d} "
            f"levels {mv.max_level:>3d}/{ms.max_level:<3d} "
            f"hot {mv.hot_depth:>3d}/{ms.hot_depth:<3d} "
            f"ratio {outcome.timings['sim_overhead_ratio']:.2f}x"
        )
    report_lines = ["lutflow-bench v1", f"circuits {len(paths)}", *rows]
    (out / "bench_report.txt").write_bytes(("\n".join(report_lines) + "\n").encode("utf-8"))
    args_design = "batch"
    (out / "manifest.txt").write_bytes(
        _manifest("bench", args, args_design, [f"circuits_dir {args.circuits}"])
    )
    print(f"{len(paths)} circuits (vanilla/simopt):")
    for line in table:
        print(f"  {line}")
    print(f"bench report written to {out / 'bench_report.txt'}")
    return 0


def _add_input_args(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--aiger", metavar="PATH", help="ASCII AIGER (.aag) input netlist")
    group.add_argument("--blif", metavar="PATH", help="BLIF input netlist")


def _add_sim_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cycles", type=int, default=256, help="simulation cycles (default 256)")
    p.add_argument("--seed", type=int, default=0, help="64-bit stimulus seed (default 0)")
    p.add_argument(
        "--track",
        action="append",
        default=[],
        metavar="GLOB",
        help="track only matching nets/buses (* and ? wildcards; repeatable)",
    )
    p.add_argument("--stimulus", metavar="PATH", help="stimulus file (default: random)")


def _add_map_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=4, help="LUT input cap, 2..8 (default 4)")
    p.add_argument("--priority", type=int, default=8, help="priority cuts per node (default 8)")
    p.add_argument(
        "--hot-percentile",
        type=float,
        default=80.0,
        help="percentile defining hot nets for hot_depth (default 80)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lutflow",
        description="Toggle-activity profiling and activity-weighted LUT mapping for AIGs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate and write the activity dump")
    _add_input_args(p)
    _add_sim_args(p)
    p.add_argument("--out", default="lutflow-out", help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("map", help="map a netlist using an existing activity dump")
    _add_input_args(p)
    _add_map_args(p)
    p.add_argument("--dump", required=True, metavar="PATH", help="activity dump file")
    p.add_argument("--mode", choices=COST_MODES, default=COST_VANILLA)
    p.add_argument("--out", default="lutflow-out", help="output directory")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("compare", help="simulate, map both modes, verify, and report")
    _add_input_args(p)
    _add_sim_args(p)
    _add_map_args(p)
    p.add_argument("--out", default="lutflow-out", help="output directory")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="run compare over a directory of circuits")
    p.add_argument("circuits", metavar="DIR", help="directory of .aag / .blif circuits")
    _add_sim_args(p)
    _add_map_args(p)
    p.add_argument("--out", default="lutflow-out", help="output directory")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    problems = _validate_config(args)
    if problems:
        for problem in problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_STIMULUS
    try:
        return args.func(args)
    except StimulusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STIMULUS
    except DumpFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DUMP
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except LutflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
