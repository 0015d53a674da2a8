"""Command line: ``adaptgraph run ...`` and ``adaptgraph sweep ...``.

Exit codes: 0 success, 2 invalid configuration, 3 unparsable input or
policy file, 4 migration failure during an adaptive run.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import AdaptationAborted, ConfigError, GraphInputError, ParseError
from .graph import Repr
from .harness import MODES, RunConfig, run, sweep, sweep_csv
from .kernels import KERNELS
from .workload import WEIGHT_MODES, GenSpec

EXIT_OK, EXIT_CONFIG, EXIT_PARSE, EXIT_MIGRATION = 0, 2, 3, 4


def parse_gen(text: str) -> GenSpec:
    """``n=N,density=D[,seed=S][,weights=unit|uniform]`` with density in percent."""
    fields: dict[str, str] = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        if not sep or not value:
            raise ConfigError(f"bad generator field {part!r} (expected key=value)")
        fields[key.strip()] = value.strip()
    unknown = set(fields) - {"n", "density", "seed", "weights"}
    if unknown:
        raise ConfigError(f"unknown generator field(s): {', '.join(sorted(unknown))}")
    if not {"n", "density"} <= set(fields):
        raise ConfigError("generator spec needs n= and density=")
    try:
        return GenSpec(int(fields["n"]), float(fields["density"]), fields.get("weights", "uniform"),
                       int(fields.get("seed", 0)))
    except ValueError as exc:
        raise ConfigError(f"bad generator spec {text!r}: {exc}") from None


def parse_number_list(text: str, kind=float) -> list:
    """``1,5,10`` or an inclusive range ``start:stop:step``."""
    try:
        if ":" in text:
            start, stop, step = (kind(x) for x in text.split(":"))
            if step <= 0:
                raise ValueError("step must be positive")
            out, x = [], start
            while x <= stop + 1e-9:
                out.append(kind(round(x, 9)) if kind is float else x)
                x += step
            return out
        return [kind(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}: {exc}") from None


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adaptgraph", description="Adaptive graph representation benchmarks.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one kernel on one graph")
    r.add_argument("--kernel", required=True, choices=sorted(KERNELS))
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", type=Path, help="SNAP edge-list file")
    src.add_argument("--gen", help="n=N,density=D[,seed=S][,weights=unit|uniform]")
    r.add_argument("--densify", type=float, metavar="D", help="add random edges up to D percent density")
    r.add_argument("--mode", required=True, choices=MODES)
    r.add_argument("--policy", type=Path, help="policy file (adaptive; default: bundled for the kernel)")
    r.add_argument("--start", choices=[x.value for x in Repr], default="matrix",
                   help="starting representation in adaptive mode (default matrix)")
    r.add_argument("--trigger", action="append", default=[], metavar="P:ACTION",
                   help="scheduled action at P%% progress: list, matrix, switch or mem=MB (repeatable)")
    r.add_argument("--repeat", type=int, default=1, metavar="K", help="runs; the median is reported")
    r.add_argument("--baselines", action="store_true",
                   help="also time both fixed modes to report realized benefit and overhead")
    r.add_argument("--seed", type=int, default=0, help="densification seed")
    r.add_argument("--out", type=Path, required=True, help="directory for trace.csv and summary.txt")

    s = sub.add_parser("sweep", help="fixed and adaptive times over densities and sizes")
    s.add_argument("--kernel", required=True, choices=sorted(KERNELS))
    s.add_argument("--densities", required=True, help="percent list '1,5,10' or range '1:50:5'")
    s.add_argument("--sizes", required=True, help="node counts, e.g. '200,500'")
    s.add_argument("--modes", default=",".join(MODES), help="subset of list,matrix,adaptive")
    s.add_argument("--weights", choices=WEIGHT_MODES, default="uniform")
    s.add_argument("--policy", type=Path)
    s.add_argument("--start", choices=[x.value for x in Repr], default="matrix")
    s.add_argument("--repeat", type=int, default=1)
    s.add_argument("--warmup", type=int, default=1, metavar="W", help="untimed runs per point and mode (default 1)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", type=Path, help="write sweep.csv here (CSV always goes to stdout)")
    return p


def _cmd_run(args) -> int:
    cfg = RunConfig(args.kernel, input_path=args.input, gen=parse_gen(args.gen) if args.gen else None,
                    densify_percent=args.densify, mode=args.mode, policy_path=args.policy,
                    schedule=tuple(args.trigger), start_repr=Repr(args.start), repeat=args.repeat,
                    out_dir=args.out, seed=args.seed, baselines=args.baselines)
    report = run(cfg)
    sys.stdout.write(report.table())
    return EXIT_OK


def _cmd_sweep(args) -> int:
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    bad = set(modes) - set(MODES)
    if bad:
        raise ConfigError(f"unknown mode(s): {', '.join(sorted(bad))}")
    sizes = parse_number_list(args.sizes, int)
    if args.policy is not None and not args.policy.is_file():
        raise ConfigError(f"policy file {args.policy} not found")
    rows = sweep(args.kernel, parse_number_list(args.densities), sizes, modes, seed=args.seed,
                 weight_mode=args.weights, repeat=args.repeat, policy_path=args.policy, start=Repr(args.start),
                 warmup=args.warmup)
    text = sweep_csv(rows)
    sys.stdout.write(text)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "sweep.csv").write_text(text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _cmd_run(args) if args.command == "run" else _cmd_sweep(args)
    except ParseError as exc:
        print(f"adaptgraph: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except AdaptationAborted as exc:
        print(f"adaptgraph: migration failed: {exc} ({exc.cause})", file=sys.stderr)
        return EXIT_MIGRATION
    except (ConfigError, GraphInputError, FileNotFoundError) as exc:
        print(f"adaptgraph: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
