"""Command-line interface: ``mbonacci <subcommand> [flags]``.

Exit status is 0 on success, 2 on usage errors and 1 on computation errors.
Errors are written to standard error prefixed with ``error:``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .chain import build_chain, density_scan
from .errors import MbonacciError, RangeError
from .frame import threshold_sweep
from .numbersys import gap_table, trib_expand
from .spectral import default_digits, perron_root
from .substitution import stream_for

SCHEMA = 1
DEFAULT_MAX_DIGITS = 10**8


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    command: str
    flags: dict = field(default_factory=dict)
    output: Path | None = None
    summary: Path | None = None
    max_digits: int = DEFAULT_MAX_DIGITS


def fmt(x) -> str:
    """CSV cell: floats to 12 significant digits, everything else via str."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g")
    if x is None:
        return ""
    return str(x)


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) for x in row])
    return buf.getvalue()


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def to_json(doc, compact: bool = False) -> str:
    if compact:
        return json.dumps(doc, separators=(",", ":"), default=_json_default) + "\n"
    return json.dumps(doc, indent=2, default=_json_default) + "\n"


def write_atomic(path: Path, text: str) -> None:
    """Write through a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(cfg: RunConfig, text: str) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        write_atomic(cfg.output, text)


def emit_summary(cfg: RunConfig, doc: dict) -> None:
    text = to_json(doc)
    if cfg.summary is None:
        sys.stderr.write(text)
    else:
        write_atomic(cfg.summary, text)


def cmd_word(cfg: RunConfig) -> int:
    a = cfg.flags
    need = max(a["left"], a["length"])
    if need > cfg.max_digits:
        raise RangeError(f"requested {need} digits exceeds --max-digits {cfg.max_digits}")
    stream = stream_for(a["m"], -a["left"], a["length"], max_digits=cfg.max_digits)
    digits = stream.window(-a["left"], a["length"])
    if a["format"] == "digits":
        emit(cfg, "".join(str(int(d)) for d in digits) + "\n")
    else:
        ks = range(-a["left"], a["length"])
        emit(cfg, to_csv(["index", "digit"], zip(ks, (int(d) for d in digits))))
    return 0


def cmd_perron(cfg: RunConfig) -> int:
    a = cfg.flags
    digits = a["digits"] if a["digits"] is not None else default_digits()
    p = perron_root(a["m"], digits=digits)
    doc = {
        "schema": SCHEMA,
        "m": p.m,
        "rho": p.rho,
        "eigenvector": p.left_eigenvector.tolist(),
        "poly_residual": p.poly_residual,
        "eig_residual": p.eig_residual,
        "error_bound": p.error_bound,
        "digits": p.precision,
    }
    if digits is not None:
        doc["rho_digits"] = p.rho_string()
    emit(cfg, to_json(doc))
    return 0


def cmd_chain(cfg: RunConfig) -> int:
    a = cfg.flags
    lo, hi = a["from"], a["to"]
    if lo > hi:
        raise UsageError("chain: --from must not exceed --to")
    if max(-lo, hi + 1) > cfg.max_digits:
        raise RangeError(f"window exceeds --max-digits {cfg.max_digits}")
    # One extra point on the right so every emitted row has its gap digit.
    chain = build_chain(a["m"], min(lo, 0), max(hi, 0) + 1, max_digits=cfg.max_digits)
    rows = (
        (k, chain[k], int(chain.gap_digits[k - chain.k_min]))
        for k in range(lo, hi + 1)
    )
    emit(cfg, to_csv(["k", "lambda", "gap_digit"], rows))
    return 0


def cmd_density(cfg: RunConfig) -> int:
    a = cfg.flags
    if a["points"] > cfg.max_digits:
        raise RangeError(f"--points exceeds --max-digits {cfg.max_digits}")
    chain = build_chain(a["m"], 0, a["points"], max_digits=cfg.max_digits)
    report = density_scan(chain, a["rmin"], a["rmax"], a["step"])
    emit(cfg, to_csv(["r", "n", "ratio"], report.samples))
    emit_summary(cfg, {"schema": SCHEMA, "points": a["points"], **report.summary()})
    return 0


def cmd_gaps(cfg: RunConfig) -> int:
    a = cfg.flags
    rows = gap_table(a["m"], range(1, a["nmax"] + 1), a["krange"])
    emit(cfg, to_csv(
        ["N", "gamma", "gamma_sharp", "brute_min", "holds"],
        [(r.N, r.gamma, r.gamma_sharp, r.brute_min, r.holds) for r in rows],
    ))
    return 0 if all(r.holds for r in rows) else 1


def cmd_expand(cfg: RunConfig) -> int:
    emit(cfg, to_json(trib_expand(cfg.flags["n"]).to_dict(), compact=True))
    return 0


def cmd_frame(cfg: RunConfig) -> int:
    a = cfg.flags
    if a["steps"] < 1:
        raise UsageError("frame: --steps must be >= 1")
    grid = np.linspace(a["lmin"], a["lmax"], a["steps"]) if a["steps"] > 1 else [a["lmin"]]
    report = threshold_sweep(a["m"], a["k"], grid)
    emit(cfg, to_csv(["L", "K", "c1", "c2", "regime"], report.rows()))
    emit_summary(cfg, {"schema": SCHEMA, **report.summary()})
    return 0


def cmd_repro(cfg: RunConfig) -> int:
    from . import repro

    a = cfg.flags
    report, tables = repro.run(fast=a["fast"])
    if not a["json_only"]:
        outdir = Path(a["outdir"])
        for name, (header, rows) in tables.items():
            write_atomic(outdir / name, to_csv(header, rows))
        report["side_files"] = sorted(tables)
    emit(cfg, to_json(report))
    return 0 if report["passed"] else 1


COMMANDS = {
    "word": cmd_word,
    "perron": cmd_perron,
    "chain": cmd_chain,
    "density": cmd_density,
    "gaps": cmd_gaps,
    "expand": cmd_expand,
    "frame": cmd_frame,
    "repro": cmd_repro,
}


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _order(text):
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"order must be >= 2, got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", type=Path, help="write the main output here instead of stdout")
    common.add_argument("--max-digits", type=_positive_int, default=DEFAULT_MAX_DIGITS,
                        help="safety cap on generated word length (default 10^8)")

    with_summary = _Parser(add_help=False)
    with_summary.add_argument("--summary", type=Path,
                              help="write the JSON summary here instead of stderr")

    parser = _Parser(prog="mbonacci", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("word", parents=[common], help="digits of the bi-infinite m-bonacci word")
    p.add_argument("--m", type=_order, required=True)
    p.add_argument("--length", type=_nonneg_int, required=True, help="digits v_0 .. v_{length-1}")
    p.add_argument("--left", type=_nonneg_int, default=0, help="also emit v_{-left} .. v_{-1}")
    p.add_argument("--format", choices=["digits", "csv"], default="digits")

    p = sub.add_parser("perron", parents=[common], help="Perron root and left eigenvector")
    p.add_argument("--m", type=_order, required=True)
    p.add_argument("--digits", type=_positive_int, help="decimal digits of extended precision")

    p = sub.add_parser("chain", parents=[common], help="chain points lambda_k")
    p.add_argument("--m", type=_order, required=True)
    p.add_argument("--from", dest="from", type=int, required=True)
    p.add_argument("--to", type=int, required=True)

    p = sub.add_parser("density", parents=[common, with_summary], help="scan n(r)/r")
    p.add_argument("--m", type=_order, required=True)
    p.add_argument("--rmin", type=_positive_float, required=True)
    p.add_argument("--rmax", type=_positive_float, required=True)
    p.add_argument("--step", type=_positive_float, required=True)
    p.add_argument("--points", type=_positive_int, default=20000, help="chain points lambda_0 .. lambda_points")

    p = sub.add_parser("gaps", parents=[common], help="gap constants against brute force")
    p.add_argument("--m", type=int, choices=[2, 3], required=True)
    p.add_argument("--nmax", type=_positive_int, required=True)
    p.add_argument("--krange", type=_nonneg_int, required=True)

    p = sub.add_parser("expand", parents=[common], help="greedy Tribonacci expansion")
    p.add_argument("--n", type=_positive_int, required=True)

    p = sub.add_parser("frame", parents=[common, with_summary], help="Gram-matrix frame constants")
    p.add_argument("--m", type=_order, required=True)
    p.add_argument("--k", type=_nonneg_int, required=True, help="frequencies lambda_k with |k| <= K")
    p.add_argument("--lmin", type=_positive_float, required=True)
    p.add_argument("--lmax", type=_positive_float, required=True)
    p.add_argument("--steps", type=_positive_int, default=11)

    p = sub.add_parser("repro", parents=[common], help="regenerate every reference value")
    p.add_argument("--fast", action="store_true", help="reduced ranges, same checks")
    p.add_argument("--json-only", action="store_true", help="skip CSV side files")
    p.add_argument("--outdir", default="repro-output", help="directory for CSV side files")
    return parser


def parse(args) -> RunConfig:
    ns = vars(build_parser().parse_args(args))
    command = ns.pop("command")
    return RunConfig(
        command=command,
        output=ns.pop("output", None),
        summary=ns.pop("summary", None),
        max_digits=ns.pop("max_digits", DEFAULT_MAX_DIGITS),
        flags=ns,
    )


def dispatch(args) -> int:
    try:
        cfg = parse(args)
        if cfg.command in ("density", "frame"):
            lo, hi = ("rmin", "rmax") if cfg.command == "density" else ("lmin", "lmax")
            if cfg.flags[lo] > cfg.flags[hi]:
                raise UsageError(f"{cfg.command}: --{lo} must not exceed --{hi}")
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MbonacciError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (MemoryError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    sys.exit(dispatch(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
