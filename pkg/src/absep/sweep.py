"""Grid sweeps over channel parameters, written as CSV or JSON."""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from . import __version__
from . import channels as ch
from .classifier import CRITERIA, classify_channel, run_criterion
from .linalg import ContractError
from .states import parse_partition, purity_threshold

INVALID = "Invalid"


@dataclass(frozen=True)
class Axis:
    name: str
    paths: tuple[str, ...]
    lo: float
    hi: float
    steps: int

    def values(self) -> np.ndarray:
        """Cell centres of ``steps`` equal cells on [lo, hi)."""
        h = (self.hi - self.lo) / self.steps
        return self.lo + h * (np.arange(self.steps) + 0.5)


@dataclass(frozen=True)
class SweepSpec:
    template: dict
    axes: tuple[Axis, ...]
    partition: str
    criteria: tuple[str, ...]
    dispatch: bool = True

    @classmethod
    def from_dict(cls, obj: dict) -> "SweepSpec":
        try:
            axes = []
            for a in obj["axes"]:
                paths = tuple(a["paths"]) if "paths" in a else (a.get("path", a["name"]),)
                axes.append(Axis(a["name"], paths, float(a["min"]), float(a["max"]), int(a["steps"])))
            spec = cls(obj["family"], tuple(axes), obj["partition"], tuple(obj.get("criteria", ())),
                       bool(obj.get("dispatch", True)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ContractError(f"malformed sweep spec: {exc}") from exc
        spec.check()
        return spec

    def to_dict(self) -> dict:
        return {
            "family": self.template,
            "axes": [{"name": a.name, "paths": list(a.paths), "min": a.lo, "max": a.hi, "steps": a.steps}
                     for a in self.axes],
            "partition": self.partition,
            "criteria": list(self.criteria),
            "dispatch": self.dispatch,
        }

    def check(self) -> None:
        if not 1 <= len(self.axes) <= 3:
            raise ContractError("a sweep needs one to three axes")
        for a in self.axes:
            if a.steps < 2:
                raise ContractError(f"axis {a.name} needs at least 2 steps, got {a.steps}")
            for p in a.paths:
                _get_path(self.template, p)
        for c in self.criteria:
            if c not in CRITERIA:
                raise ContractError(f"unknown criterion {c!r}")
        parse_partition(self.partition)
        ch.channel_from_dict(self.template)

    def sha256(self) -> str:
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()


def _get_path(obj, path: str):
    cur = obj
    for key in path.split("."):
        try:
            cur = cur[int(key)] if isinstance(cur, list) else cur[key]
        except (KeyError, IndexError, ValueError, TypeError) as exc:
            raise ContractError(f"axis path {path!r} is not a parameter of the family") from exc
    if not isinstance(cur, (int, float)):
        raise ContractError(f"axis path {path!r} does not point at a number")
    return cur


def _set_path(obj, path: str, value: float) -> None:
    *head, last = path.split(".")
    cur = obj
    for key in head:
        cur = cur[int(key)] if isinstance(cur, list) else cur[key]
    if isinstance(cur, list):
        cur[int(last)] = value
    else:
        cur[last] = value


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return f"{x:.12g}"


def _cell(spec: SweepSpec, part, point) -> dict:
    obj = json.loads(json.dumps(spec.template))
    for a, v in zip(spec.axes, point):
        for p in a.paths:
            _set_path(obj, p, float(v))
    rec = {a.name: float(v) for a, v in zip(spec.axes, point)}
    try:
        c = ch.channel_from_dict(obj)
    except ContractError:
        c = None
    for name in spec.criteria:
        try:
            rec[name] = run_criterion(name, c, part).status.value if c is not None else INVALID
        except ContractError:
            rec[name] = INVALID
    if spec.dispatch:
        try:
            v = classify_channel(c, part)
            rec.update(dispatch=v.status.value, decided_by=v.criterion, margin=v.margin)
        except (ContractError, AttributeError):
            rec.update(dispatch=INVALID, decided_by="", margin=float("nan"))
    return rec


def run_sweep(spec: SweepSpec) -> list[dict]:
    """One record per grid cell, in row-major axis order."""
    part = parse_partition(spec.partition)
    grids = [a.values() for a in spec.axes]
    return [_cell(spec, part, point) for point in itertools.product(*grids)]


def columns(spec: SweepSpec) -> list[str]:
    cols = [a.name for a in spec.axes] + list(spec.criteria)
    if spec.dispatch:
        cols += ["dispatch", "decided_by", "margin"]
    return cols


def provenance(spec_hash: str, seed: int) -> str:
    return f"# absep {__version__} seed={seed} spec_sha256={spec_hash}"


def render(records: list[dict], cols: list[str], fmt: str, header: str) -> str:
    if fmt == "json":
        body = {"provenance": header.lstrip("# "), "columns": cols,
                "records": [{k: _json_val(r.get(k)) for k in cols} for r in records]}
        return json.dumps(body, indent=1, sort_keys=False) + "\n"
    if fmt != "csv":
        raise ContractError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    buf.write(header + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in records:
        w.writerow([_fmt(r[k]) if isinstance(r.get(k), float) else r.get(k, "") for k in cols])
    return buf.getvalue()


def _json_val(v):
    if isinstance(v, float) and math.isnan(v):
        return None
    return v


# --- presets ----------------------------------------------------------------


def _dep_pair():
    return {"family": "local_product", "factors": [{"family": "depolarizing", "d": 2, "q": 0.0} for _ in range(2)]}


def _unital_pair():
    return {"family": "local_product",
            "factors": [{"family": "unital_qubit", "l1": 0.0, "l2": 0.0, "l3": 0.0} for _ in range(2)]}


def _shared(name):
    return [f"factors.0.{name}", f"factors.1.{name}"]


PRESETS: dict[str, dict] = {
    "local-dep-2q": {
        "family": _dep_pair(),
        "axes": [
            {"name": "q1", "path": "factors.0.q", "min": -1, "max": 1, "steps": 400},
            {"name": "q2", "path": "factors.1.q", "min": -1, "max": 1, "steps": 400},
        ],
        "partition": "2x2",
        "criteria": ["local_dep_2q_sufficient", "local_dep_2q_exact"],
        "dispatch": False,
    },
    "unital-pair": {
        "family": _unital_pair(),
        "axes": [{"name": n, "paths": _shared(n), "min": -1, "max": 1, "steps": 15} for n in ("l1", "l2", "l3")],
        "partition": "2x2",
        "criteria": ["completely_positive", "local_unital_sufficient"],
        "dispatch": False,
    },
    "ctit-2x4": {
        "family": {"family": "ctit", "d": 8, "alpha": 0.0, "beta": 0.0},
        "axes": [
            {"name": "alpha", "min": -1.5, "max": 3.5, "steps": 300},
            {"name": "beta", "min": -1.5, "max": 3.5, "steps": 300},
        ],
        "partition": "2x4",
        "criteria": ["positive", "ctit_2n_exact", "ctit_sufficient", "ctit_nqubit", "ctit_necessary"],
        "dispatch": False,
    },
    "bdep-2x2": {
        "family": {"family": "bipartite_depolarizing", "m": 2, "n": 2, "alpha": 0.0, "beta": 0.0, "gamma": 0.0},
        "axes": [{"name": n, "min": -2, "max": 6, "steps": 24} for n in ("alpha", "beta", "gamma")],
        "partition": "2x2",
        "criteria": ["bipartite_dep_sufficient", "bipartite_dep_necessary"],
        "dispatch": True,
    },
    "bdep-3x3": {
        "family": {"family": "bipartite_depolarizing", "m": 3, "n": 3, "alpha": 0.0, "beta": 0.0, "gamma": 0.0},
        "axes": [{"name": n, "min": -3, "max": 9, "steps": 24} for n in ("alpha", "beta", "gamma")],
        "partition": "3x3",
        "criteria": ["bipartite_dep_sufficient", "bipartite_dep_necessary"],
        "dispatch": True,
    },
}

PRESET_NAMES = ("purity-thresholds",) + tuple(PRESETS)


def purity_curves(dims=range(4, 65)) -> tuple[list[str], list[dict]]:
    """Purity thresholds per total dimension: separability ball, exact
    purity bound and its simpler approximation."""
    cols = ["mn", "ball", "purity_exact", "purity_approx"]
    rows = [{"mn": d, "ball": 1.0 / (d - 1), "purity_exact": purity_threshold(d), "purity_approx": 9.0 / (d + 8)}
            for d in dims]
    return cols, rows


def sweep_text(spec_obj: dict | None, preset: str | None, fmt: str = "csv", seed: int = 0) -> str:
    """Render a sweep (or the purity-curve table) as text."""
    if preset == "purity-thresholds":
        cols, rows = purity_curves()
        digest = hashlib.sha256(b"purity-thresholds").hexdigest()
        return render(rows, cols, fmt, provenance(digest, seed))
    if preset is not None:
        if preset not in PRESETS:
            raise ContractError(f"unknown preset {preset!r}; known: {', '.join(PRESET_NAMES)}")
        spec_obj = PRESETS[preset]
    spec = SweepSpec.from_dict(spec_obj)
    return render(run_sweep(spec), columns(spec), fmt, provenance(spec.sha256(), seed))
