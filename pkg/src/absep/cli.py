"""Command-line front end.

Exit codes: 0 Holds / AS / witness found, 1 Fails / NotAS,
2 Undetermined / no witness, 64 bad input, 74 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import demo
from .channels import channel_from_dict
from .classifier import MapStatus, MapVerdict, classify_channel
from .linalg import ContractError, Spectrum
from .states import Bipartition, Status, classify_spectrum, classify_state, parse_partition
from .sweep import PRESET_NAMES, sweep_text
from .witness import random_unitary_witness

EX_OK, EX_FAIL, EX_UNDECIDED = 0, 1, 2
EX_DATAERR, EX_IOERR = 64, 74

STATE_CODES = {Status.HOLDS: EX_OK, Status.FAILS: EX_FAIL, Status.UNDETERMINED: EX_UNDECIDED}
MAP_CODES = {MapStatus.AS: EX_OK, MapStatus.NOT_AS: EX_FAIL, MapStatus.UNDETERMINED: EX_UNDECIDED}


class InputError(Exception):
    pass


def max_dim() -> int:
    try:
        return int(os.environ.get("ABSEP_MAX_DIM", "64"))
    except ValueError as exc:
        raise InputError("ABSEP_MAX_DIM must be an integer") from exc


def parse_spectrum(text: str) -> Spectrum:
    try:
        vals = [float(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise InputError(f"cannot parse spectrum {text!r}") from exc
    return Spectrum(np.array(vals))


def read_matrix(path: str) -> np.ndarray:
    """Text format: a line with the dimension, then one row per line of
    whitespace-separated ``re,im`` pairs."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise InputError(f"{path}: empty matrix file")
    try:
        dim = int(lines[0])
    except ValueError as exc:
        raise InputError(f"{path}: first line must be the dimension") from exc
    if not 1 <= dim <= max_dim():
        raise InputError(f"{path}: dimension {dim} outside 1..{max_dim()} (ABSEP_MAX_DIM)")
    if len(lines) != dim + 1:
        raise InputError(f"{path}: expected {dim} rows, found {len(lines) - 1}")
    M = np.empty((dim, dim), dtype=complex)
    for i, ln in enumerate(lines[1:]):
        toks = ln.split()
        if len(toks) != dim:
            raise InputError(f"{path}: row {i + 1} has {len(toks)} entries, expected {dim}")
        for j, tok in enumerate(toks):
            try:
                re, im = tok.split(",")
                M[i, j] = complex(float(re), float(im))
            except ValueError as exc:
                raise InputError(f"{path}: bad entry {tok!r} at ({i + 1}, {j + 1})") from exc
    return M


def load_json(arg: str) -> dict:
    text = arg if arg.lstrip().startswith("{") else Path(arg).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def _emit(obj, out) -> None:
    out.write(json.dumps(obj, indent=1) + "\n")


def cmd_classify_state(args, out) -> int:
    part = parse_partition(args.partition)
    if args.matrix:
        v = classify_state(read_matrix(args.matrix), part)
    else:
        v = classify_spectrum(parse_spectrum(args.spectrum), part)
    _emit(v.to_dict(), out)
    return STATE_CODES[v.status]


def cmd_classify_channel(args, out) -> int:
    c = channel_from_dict(load_json(args.channel))
    part = parse_partition(args.partition)
    v = classify_channel(c, part, seed=args.seed)
    if v.status is MapStatus.UNDETERMINED and args.witness_trials and isinstance(part, Bipartition):
        w = random_unitary_witness(c, part, args.witness_trials, args.seed)
        if w is not None:
            v = MapVerdict(MapStatus.NOT_AS, "random_unitary_witness", str(part), w.negativity, w.to_dict(), v.details)
    _emit(v.to_dict(), out)
    return MAP_CODES[v.status]


def cmd_witness(args, out) -> int:
    c = channel_from_dict(load_json(args.channel))
    part = parse_partition(args.partition)
    if not isinstance(part, Bipartition):
        raise ContractError("witness search needs a bipartition")
    w = random_unitary_witness(c, part, args.witness_trials, args.seed)
    if w is None:
        _emit({"found": False, "trials": args.witness_trials, "seed": args.seed}, out)
        return EX_UNDECIDED
    _emit({"found": True, **w.to_dict()}, out)
    return EX_OK


def cmd_sweep(args, out) -> int:
    if (args.spec is None) == (args.preset is None):
        raise InputError("give either a sweep spec file or --preset")
    spec = None if args.spec is None else load_json(args.spec)
    text = sweep_text(spec, args.preset, args.format, args.seed)
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    return EX_OK


def cmd_demo(args, out) -> int:
    if args.only is not None and args.only not in demo.CHECKS:
        raise InputError(f"unknown check {args.only!r}; known: {', '.join(demo.CHECKS)}")
    rows = demo.run(args.only)
    width = max(len(r[0]) for r in rows)
    for ident, desc, ok, info in rows:
        out.write(f"{'PASS' if ok else 'FAIL'}  {ident:<{width}}  {desc}  [{info}]\n")
    failed = sum(not r[2] for r in rows)
    out.write(f"{len(rows) - failed}/{len(rows)} passed\n")
    return EX_OK if failed == 0 else EX_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="absep", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify-state", help="classify a state by its spectrum")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--spectrum", help="comma-separated eigenvalues")
    src.add_argument("--matrix", help="dense complex matrix file")
    s.add_argument("--partition", required=True, help='"MxN", "2^N" or "2x2x2"')
    s.set_defaults(func=cmd_classify_state)

    s = sub.add_parser("classify-channel", help="classify a map given as JSON")
    s.add_argument("channel", help="JSON file or inline JSON object")
    s.add_argument("--partition", required=True)
    s.add_argument("--witness-trials", type=int, default=0)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_classify_channel)

    s = sub.add_parser("witness", help="search for an entangling unitary")
    s.add_argument("channel")
    s.add_argument("--partition", required=True)
    s.add_argument("--witness-trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("sweep", help="grid sweep to CSV or JSON")
    s.add_argument("spec", nargs="?", help="sweep spec JSON file")
    s.add_argument("--preset", choices=PRESET_NAMES)
    s.add_argument("--out")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("demo", help="run the reference checks")
    s.add_argument("--only")
    s.set_defaults(func=cmd_demo)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EX_DATAERR if exc.code else EX_OK
    try:
        return args.func(args, out)
    except (InputError, ContractError) as exc:
        print(f"absep: {exc}", file=sys.stderr)
        return EX_DATAERR
    except OSError as exc:
        print(f"absep: {exc}", file=sys.stderr)
        return EX_IOERR


if __name__ == "__main__":
    sys.exit(main())
