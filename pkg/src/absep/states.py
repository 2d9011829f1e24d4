"""Spectral criteria for absolute separability of states.

All criteria depend on the spectrum alone, so each accepts either a
:class:`~absep.linalg.Spectrum` or any sequence of eigenvalues.  A criterion
only ever claims the direction it is valid for: sufficient tests return
``HOLDS`` or ``UNDETERMINED``, necessary tests ``FAILS`` or ``UNDETERMINED``.

``margin`` is signed: non-negative means the criterion's inequality is met.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .linalg import ContractError, Spectrum, as_spectrum, ghz_basis_vector, spectrum_of

BOUNDARY_TOL = 1e-9
NQUBIT_BALL_COEFF = 54.0 / 17.0


class Status(str, enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class Bipartition:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 2 or self.n < 2:
            raise ContractError(f"partition {self.m}x{self.n}: both factors must be >= 2")

    @property
    def dim(self) -> int:
        return self.m * self.n

    def __str__(self) -> str:
        return f"{self.m}x{self.n}"


@dataclass(frozen=True)
class MultiPartition:
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.dims) < 2 or any(d < 2 for d in self.dims):
            raise ContractError("a multipartition needs at least two factors, each >= 2")

    @classmethod
    def qubits(cls, N: int) -> "MultiPartition":
        return cls((2,) * N)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    @property
    def is_qubits(self) -> bool:
        return all(d == 2 for d in self.dims)

    def __str__(self) -> str:
        if self.is_qubits:
            return f"2^{len(self.dims)}"
        return "x".join(str(d) for d in self.dims)


def parse_partition(text: str) -> Bipartition | MultiPartition:
    """Parse ``"MxN"``, ``"2^N"`` or ``"2x2x2"``."""
    t = text.strip().lower()
    try:
        if "^" in t:
            base, exp = t.split("^")
            if int(base) != 2:
                raise ContractError("only 2^N multiqubit partitions are supported")
            return MultiPartition.qubits(int(exp))
        parts = [int(p) for p in t.split("x")]
    except ValueError as exc:
        raise ContractError(f"cannot parse partition {text!r}") from exc
    if len(parts) == 2:
        return Bipartition(*parts)
    return MultiPartition(tuple(parts))


@dataclass(frozen=True)
class Verdict:
    status: Status
    criterion: str
    margin: float = float("nan")
    witness: Any = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"status": self.status.value, "criterion": self.criterion, "margin": _clean(self.margin)}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


def _clean(x: float):
    return None if x is None or (isinstance(x, float) and math.isnan(x)) else float(x)


def _jsonable(obj):
    if isinstance(obj, Spectrum):
        return obj.tolist()
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"re": obj.real.tolist(), "im": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def abs_ppt_2n(s) -> Verdict:
    """Exact test for absolute separability w.r.t. 2|n:
    lambda_1 <= lambda_{2n-1} + 2 sqrt(lambda_{2n} lambda_{2n-2})."""
    lam = as_spectrum(s).values
    if lam.size % 2 or lam.size < 4:
        raise ContractError(f"2|n criterion needs an even length >= 4, got {lam.size}")
    rhs = lam[-2] + 2.0 * math.sqrt(lam[-1] * lam[-3])
    margin = float(rhs - lam[0])
    status = Status.HOLDS if margin >= -BOUNDARY_TOL else Status.FAILS
    witness = Spectrum(lam) if status is Status.FAILS else None
    return Verdict(status, "abs_ppt_2n", margin, witness)


def separable_ball(s, part: Bipartition) -> Verdict:
    lam = as_spectrum(s).values
    if lam.size != part.dim:
        raise ContractError(f"spectrum length {lam.size} does not match partition {part}")
    margin = 1.0 / (part.dim - 1) - float(np.sum(lam**2))
    status = Status.HOLDS if margin >= -BOUNDARY_TOL else Status.UNDETERMINED
    return Verdict(status, "separable_ball", margin)


def necessary_triple(s) -> Verdict:
    """lambda_1 <= sum of the three smallest eigenvalues (necessary)."""
    lam = as_spectrum(s).values
    if lam.size < 4:
        raise ContractError("necessary condition needs at least 4 eigenvalues")
    margin = float(lam[-3] + lam[-2] + lam[-1] - lam[0])
    if margin < -BOUNDARY_TOL:
        return Verdict(Status.FAILS, "necessary_triple", margin, Spectrum(lam))
    return Verdict(Status.UNDETERMINED, "necessary_triple", margin)


def _check_mu(mu: float, dim: int) -> None:
    if not (1.0 / dim - 1e-12 <= mu <= 1.0 + 1e-12):
        raise ContractError(f"purity {mu} outside [1/{dim}, 1]")


def bracket_index(mu: float) -> int:
    """k >= 2 with 1/k <= mu <= 1/(k-1)."""
    return max(2, math.ceil(1.0 / mu - 1e-12))


def min_largest_eigenvalue(mu: float, dim: int) -> float:
    """Smallest possible largest eigenvalue of a state with purity ``mu``."""
    _check_mu(mu, dim)
    mu = min(max(mu, 1.0 / dim), 1.0)
    k = bracket_index(mu)
    return (1.0 + math.sqrt(max(k * mu - 1.0, 0.0) / (k - 1))) / k


def purity_bound_approx(part: Bipartition) -> float:
    return 9.0 / (part.dim + 8)


def purity_necessary(mu: float, part: Bipartition) -> Verdict:
    """Purity-only necessary condition.

    The simpler bound mu <= 9/(mn+8) is checked first and reported as
    ``purity_approx``; otherwise the bracketed exact form is evaluated.
    """
    dim = part.dim
    _check_mu(mu, dim)
    approx_margin = purity_bound_approx(part) - mu
    if approx_margin < -BOUNDARY_TOL:
        return Verdict(Status.FAILS, "purity_approx", approx_margin, {"purity": mu})
    lam1 = min_largest_eigenvalue(mu, dim)
    margin = 3.0 * math.sqrt(mu / (dim + 8)) - lam1
    if margin < -BOUNDARY_TOL:
        return Verdict(Status.FAILS, "purity_exact", margin, {"purity": mu})
    return Verdict(Status.UNDETERMINED, "purity_exact", margin)


def purity_threshold(dim: int, grid: int = 20000) -> float:
    """Largest purity mu_0 at which the exact purity bound still holds.

    Above mu_0 every state of dimension ``dim`` fails to be absolutely
    separable for any bipartition with that dimension.
    """
    part_dim = dim

    def ok(mu):
        return 3.0 * math.sqrt(mu / (part_dim + 8)) - min_largest_eigenvalue(mu, part_dim) >= 0

    mus = np.linspace(1.0 / dim, 1.0, grid)
    good = [i for i, mu in enumerate(mus) if ok(mu)]
    i = good[-1]
    if i == grid - 1:
        return 1.0
    lo, hi = mus[i], mus[i + 1]
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if ok(mid) else (lo, mid)
    return lo


def nqubit_ball_bound(N: int) -> float:
    return 2.0**-N * (1.0 + NQUBIT_BALL_COEFF * 3.0**-N)


def nqubit_ball(s, N: int) -> Verdict:
    """Sufficient test for absolute separability w.r.t. 2|2|...|2."""
    lam = as_spectrum(s).values
    if lam.size != 2**N:
        raise ContractError(f"spectrum length {lam.size} is not 2^{N}")
    margin = nqubit_ball_bound(N) - float(np.sum(lam**2))
    status = Status.HOLDS if margin >= -BOUNDARY_TOL else Status.UNDETERMINED
    return Verdict(status, "nqubit_ball", margin)


def classify_spectrum(s, part: Bipartition | MultiPartition) -> Verdict:
    """Run the strongest applicable criteria on a spectrum.

    For 2|n the exact test is final.  Otherwise: the separability ball, then
    the two necessary conditions, else undetermined.
    """
    spec = as_spectrum(s)
    if isinstance(part, MultiPartition):
        if len(spec) != part.dim:
            raise ContractError(f"spectrum length {len(spec)} does not match {part}")
        if part.is_qubits:
            v = nqubit_ball(spec, len(part.dims))
            if v.status is Status.HOLDS:
                return v
        # absolute separability w.r.t. a multipartition implies it for the
        # coarser cut n_1 | n_2...n_N, so bipartite necessary tests still apply
        coarse = Bipartition(part.dims[0], part.dim // part.dims[0])
        v = classify_spectrum(spec, coarse)
        if v.status is Status.FAILS:
            return v
        return Verdict(Status.UNDETERMINED, "multipartition", v.margin)
    if len(spec) != part.dim:
        raise ContractError(f"spectrum length {len(spec)} does not match partition {part}")
    if part.m == 2 or part.n == 2:
        return abs_ppt_2n(spec)
    ball = separable_ball(spec, part)
    if ball.status is Status.HOLDS:
        return ball
    triple = necessary_triple(spec)
    if triple.status is Status.FAILS:
        return triple
    pur = purity_necessary(float(np.sum(spec.values**2)), part)
    if pur.status is Status.FAILS:
        return Verdict(Status.FAILS, pur.criterion, pur.margin, spec)
    return Verdict(Status.UNDETERMINED, "undetermined", min(ball.margin, -triple.margin))


def classify_state(rho, part: Bipartition | MultiPartition) -> Verdict:
    return classify_spectrum(spectrum_of(rho), part)


GHZ_BOUNDARY_WEIGHTS = (11 / 48, 11 / 48, 23 / 144) + (11 / 144,) * 5


def ghz_diagonal_state(weights=GHZ_BOUNDARY_WEIGHTS) -> np.ndarray:
    """sum_k w_k |GHZ_k><GHZ_k| on three qubits."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (8,):
        raise ContractError("GHZ-diagonal state needs exactly 8 weights")
    as_spectrum(w)
    rho = np.zeros((8, 8), dtype=complex)
    for k in range(1, 9):
        v = ghz_basis_vector(k)
        rho += w[k - 1] * np.outer(v, v.conj())
    return rho
