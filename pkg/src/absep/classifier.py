"""Map-level classification: is every output of a map absolutely separable?

Each criterion is exposed as its own function returning a :class:`MapVerdict`.
Sufficient criteria only ever return ``AS`` or ``UNDETERMINED``; necessary
ones only ``NOT_AS`` or ``UNDETERMINED``.  ``classify_channel`` dispatches
per family, trying exact tests first, then sufficient, then necessary ones.

``margin`` is signed: non-negative means the criterion's inequality holds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import channels as ch
from .linalg import ContractError, maximally_entangled, partial_transpose, projector
from .states import (
    BOUNDARY_TOL,
    NQUBIT_BALL_COEFF,
    Bipartition,
    MultiPartition,
    Status,
    _clean,
    _jsonable,
    classify_spectrum,
    nqubit_ball_bound,
    purity_bound_approx,
)


class MapStatus(str, enum.Enum):
    AS = "AbsolutelySeparating"
    NOT_AS = "NotAbsolutelySeparating"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class MapVerdict:
    status: MapStatus
    criterion: str
    partition: str = ""
    margin: float = float("nan")
    witness: Any = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "status": self.status.value,
            "criterion": self.criterion,
            "partition": self.partition,
            "margin": _clean(self.margin),
        }
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.details:
            out["details"] = _jsonable(self.details)
        return out


def _sufficient(ok_margin: float, criterion: str, part="", **kw) -> MapVerdict:
    status = MapStatus.AS if ok_margin >= -BOUNDARY_TOL else MapStatus.UNDETERMINED
    return MapVerdict(status, criterion, str(part), float(ok_margin), **kw)


def _necessary(margin: float, criterion: str, part="", witness=None, **kw) -> MapVerdict:
    if margin < -BOUNDARY_TOL:
        return MapVerdict(MapStatus.NOT_AS, criterion, str(part), float(margin), witness, **kw)
    return MapVerdict(MapStatus.UNDETERMINED, criterion, str(part), float(margin), **kw)


def _normalised(vals) -> list[float]:
    v = np.sort(np.asarray(vals, dtype=float))[::-1]
    return (v / v.sum()).tolist()


# --- purity balls -----------------------------------------------------------


def ball_sufficient(norm: ch.NormEstimate, part: Bipartition) -> MapVerdict:
    """AS(m|n) if the maximal output purity is at most 1/(mn - 1)."""
    if norm.lower_bound_only:
        raise ContractError("ball_sufficient needs a certified maximal purity, not a numeric lower bound")
    return _sufficient(1.0 / (part.dim - 1) - norm.value, "ball", part)


def nqubit_ball_sufficient(norm: ch.NormEstimate, N: int) -> MapVerdict:
    if norm.lower_bound_only:
        raise ContractError("nqubit_ball_sufficient needs a certified maximal purity")
    return _sufficient(nqubit_ball_bound(N) - norm.value, "nqubit_ball", f"2^{N}")


def anti_ball_necessary(norm: ch.NormEstimate, part: Bipartition, channel: ch.Channel | None = None) -> MapVerdict:
    """NotAS(m|n) if some output has purity above 9/(mn + 8).

    Any achieved purity works here, so numeric lower bounds are accepted.
    """
    witness = None
    margin = purity_bound_approx(part) - norm.value
    if margin < -BOUNDARY_TOL:
        witness = {"purity": norm.value}
        if norm.argmax is not None:
            witness["input"] = norm.argmax
            if channel is not None:
                out = channel._apply(projector(norm.argmax))
                witness["spectrum"] = np.linalg.eigvalsh((out + out.conj().T) / 2)[::-1].clip(0)
    return _necessary(margin, "anti_ball", part, witness)


# --- local depolarizing -----------------------------------------------------


def _check_q(*qs: float) -> None:
    for q in qs:
        if abs(q) > 1 + 1e-12:
            raise ContractError(f"qubit depolarizing parameter {q} outside the positivity range [-1, 1]")


def _product_spectrum(qs) -> list[float]:
    spec = np.ones(1)
    for q in qs:
        spec = np.kron(spec, [(1 + abs(q)) / 2, (1 - abs(q)) / 2])
    return np.sort(spec)[::-1].tolist()


def local_dep_2q_exact(q1: float, q2: float) -> MapVerdict:
    """Exact AS(2|2) test for D_q1 (x) D_q2.

    With a >= b the larger and smaller of |q1|, |q2|:
    AS iff a (1 + b) <= sqrt(1 - a^2) (1 - b).
    """
    _check_q(q1, q2)
    a, b = max(abs(q1), abs(q2)), min(abs(q1), abs(q2))
    margin = math.sqrt(max(1 - a * a, 0.0)) * (1 - b) - a * (1 + b)
    if margin >= -BOUNDARY_TOL:
        return MapVerdict(MapStatus.AS, "local_dep_2q_exact", "2x2", margin)
    witness = {"input": "|00>", "spectrum": _product_spectrum((q1, q2))}
    return MapVerdict(MapStatus.NOT_AS, "local_dep_2q_exact", "2x2", margin, witness)


def local_dep_2q_sufficient(q1: float, q2: float) -> MapVerdict:
    _check_q(q1, q2)
    margin = 1 / 3 - (q1**2 + q2**2 + q1**2 * q2**2)
    return _sufficient(margin, "local_dep_2q_sufficient", "2x2")


def _cubic(q: float) -> float:
    return 2 * q**3 - 2 * q**2 + 3 * q - 1


def q_star(tol: float = 1e-12) -> float:
    """Symmetric two-qubit threshold: the root of 2q^3 - 2q^2 + 3q - 1 in [0.3, 0.5]."""
    lo, hi = 0.3, 0.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _cubic(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def nqubit_dep_not_as(q: float, N: int) -> MapVerdict:
    """NotAS for D_q^{(x)N} w.r.t. every cut 2^k | 2^(N-k).

    Two conditions are OR-ed: r^(N-1) > (3 + |q|)/(1 + |q|) with
    r = (1 + |q|)/(1 - |q|), or |q| > 1/N.  The witness is the output of a
    product pure input.
    """
    _check_q(q)
    if N < 2:
        raise ContractError("need at least two qubits")
    a = abs(q)
    simple = a - 1.0 / N
    if a >= 1:
        ratio = math.inf
    else:
        ratio = ((1 + a) / (1 - a)) ** (N - 1) - (3 + a) / (1 + a)
    margin = -max(simple, ratio)
    if math.isinf(margin):
        margin = -1.0
    witness = {"input": "|0...0>", "spectrum": _product_spectrum([q] * N)}
    crit = "nqubit_dep_not_as"
    return _necessary(margin, crit, f"2^{N}", witness, details={"simple": simple, "ratio": ratio})


# --- unital qubit products --------------------------------------------------


def _max_sq(l) -> float:
    return max(x * x for x in l)


def local_unital_sufficient(l, lp) -> MapVerdict:
    margin = 4 / 3 - (1 + _max_sq(l)) * (1 + _max_sq(lp))
    return _sufficient(margin, "local_unital_sufficient", "2x2")


def nqubit_unital_sufficient(params) -> MapVerdict:
    N = len(params)
    prod = math.prod(1 + _max_sq(l) for l in params)
    margin = 1 + NQUBIT_BALL_COEFF * 3.0**-N - prod
    return _sufficient(margin, "nqubit_unital_sufficient", f"2^{N}")


# --- trace / identity / transpose family ------------------------------------


def ctit_sufficient(alpha: float, beta: float, part: Bipartition) -> MapVerdict:
    """Stripe plus ellipse: the ball condition on the maximal output purity."""
    D = part.dim
    if D < 4:
        raise ContractError("need mn >= 4")
    s = alpha + beta
    stripe = min(s + 1, D / (D - 2) - s)
    ellipse = 2 * (D - 2) / (D - 3) - (alpha - beta) ** 2 - (D - 3) / (D - 1) * (s - 2 / (D - 3)) ** 2
    return _sufficient(min(stripe, ellipse), "ctit_sufficient", part, details={"stripe": stripe, "ellipse": ellipse})


def _ctit_extreme(alpha: float, beta: float) -> tuple[float, float]:
    s = alpha + beta
    return s, max(abs(s), abs(alpha - beta))


def ctit_witness_spectrum(alpha: float, beta: float, d: int) -> list[float]:
    """Output spectrum for the extremal pure input (unnormalised values
    1 + (s +- M)/2 and d - 2 ones)."""
    s, M = _ctit_extreme(alpha, beta)
    return _normalised([1 + (s + M) / 2] + [1.0] * (d - 2) + [1 + (s - M) / 2])


def ctit_cases(alpha: float, beta: float) -> str | None:
    """Which of the four parameter cases of the exact 2|n test applies."""
    s = alpha + beta
    if alpha >= 0 and beta >= 0 and s <= 2:
        return "i"
    if alpha >= 0 and alpha**2 - 4 <= 4 * beta < 0:
        return "ii"
    if beta >= 0 and beta**2 - 4 <= 4 * alpha < 0:
        return "iii"
    if alpha < 0 and beta < 0 and s >= -1:
        return "iv"
    return None


def ctit_2n_exact(alpha: float, beta: float, n: int) -> MapVerdict:
    """Exact AS(2|n) test: (s + M)/2 <= 2 sqrt(1 + (s - M)/2) with
    s = alpha + beta and M = max(|s|, |alpha - beta|)."""
    if n < 2:
        raise ContractError("need n >= 2")
    s, M = _ctit_extreme(alpha, beta)
    if 1 + (s - M) / 2 < -1e-12 or 2 * n + s <= 0:
        raise ContractError(f"(alpha, beta) = ({alpha}, {beta}) is outside the positivity region")
    margin = 2 * math.sqrt(max(1 + (s - M) / 2, 0.0)) - (s + M) / 2
    part = f"2x{n}"
    if margin >= -BOUNDARY_TOL:
        return MapVerdict(MapStatus.AS, "ctit_2n_exact", part, margin, details={"case": ctit_cases(alpha, beta)})
    witness = {"spectrum": ctit_witness_spectrum(alpha, beta, 2 * n)}
    return MapVerdict(MapStatus.NOT_AS, "ctit_2n_exact", part, margin, witness)


def ctit_necessary(alpha: float, beta: float, d: int | None = None) -> MapVerdict:
    """NotAS for every bipartition if max(|alpha + beta|, |alpha - beta|) > 2."""
    _, M = _ctit_extreme(alpha, beta)
    witness = None
    if d is not None and M > 2:
        witness = {"spectrum": ctit_witness_spectrum(alpha, beta, d)}
    return _necessary(2 - M, "ctit_necessary", "" if d is None else f"any of dim {d}", witness)


def ctit_nqubit(alpha: float, beta: float, N: int) -> MapVerdict:
    d = 2**N
    s = alpha + beta
    lhs = d + 2 * s + abs(alpha * beta) + alpha * beta + alpha**2 + beta**2
    rhs = (d + s) ** 2 / d * (1 + NQUBIT_BALL_COEFF * 3.0**-N)
    return _sufficient(rhs - lhs, "ctit_nqubit", f"2^{N}")


# --- bipartite depolarizing -------------------------------------------------


def _bdep(alpha, beta, gamma, part: Bipartition) -> ch.BipartiteDepolarizing:
    c = ch.BipartiteDepolarizing(part.m, part.n, alpha, beta, gamma)
    if c.norm <= 0:
        raise ContractError("normalisation mn + alpha m + beta n + gamma must be positive")
    return c


def bipartite_dep_sufficient(alpha: float, beta: float, gamma: float, part: Bipartition) -> MapVerdict:
    """Ball condition on the output purity of the extremal pure input.

    The sign of alpha^2 m + beta^2 n + 2 gamma (alpha + beta) decides whether
    a product (>= 0) or a maximally entangled (< 0) input is extremal.
    """
    c = _bdep(alpha, beta, gamma, part)
    k = min(part.m, part.n)
    coeff = alpha**2 * part.m + beta**2 * part.n + 2 * gamma * (alpha + beta)
    branch = "factorized" if coeff >= 0 else "entangled"
    mu = 1.0 if coeff >= 0 else 1.0 / k
    margin = 1.0 / (part.dim - 1) - ch.bipartite_output_purity(c, mu)
    return _sufficient(margin, "bipartite_dep_sufficient", part, details={"branch": branch})


def bipartite_dep_equal_dims(alpha: float, beta: float, gamma: float, n: int) -> bool:
    """Entangled-branch condition for m = n: (n^2 - 1)|gamma| <= |gamma + n(alpha + beta) + n^2|."""
    return (n * n - 1) * abs(gamma) <= abs(gamma + n * (alpha + beta) + n * n) + BOUNDARY_TOL


def bipartite_dep_necessary(alpha: float, beta: float, gamma: float, part: Bipartition) -> MapVerdict:
    """Spectra of the two extremal inputs must be non-negative and satisfy
    lambda_1 <= lambda_{mn-2} + lambda_{mn-1} + lambda_{mn}."""
    c = _bdep(alpha, beta, gamma, part)
    worst = None
    for name, spec in (("entangled", ch.entangled_spectrum(c)), ("factorized", ch.factorized_spectrum(c))):
        margin = min(spec[-3] + spec[-2] + spec[-1] - spec[0], spec[-1])
        if worst is None or margin < worst[0]:
            worst = (margin, name, spec)
    margin, name, spec = worst
    return _necessary(margin, "bipartite_dep_necessary", part, {"input": name, "spectrum": spec.tolist()})


# --- structural results -----------------------------------------------------


def one_sided_not_as(m: int, n: int, inner: ch.Channel | None = None) -> MapVerdict:
    """Phi (x) Id_n is never AS(m|n): feed rho_1 (x) |0><0|.

    The output has rank at most m, hence at least m(n - 1) zero eigenvalues.
    """
    if m < 2 or n < 2:
        raise ContractError("both dimensions must be >= 2")
    out = np.full(m, 1.0 / m) if inner is None else np.linalg.eigvalsh(inner._apply(np.eye(m) / m))
    spec = _normalised(np.concatenate([np.clip(out, 0, None), np.zeros(m * (n - 1))]))
    v = classify_spectrum(spec, Bipartition(m, n))
    witness = {"input": "I/m (x) |0><0|", "spectrum": spec}
    return MapVerdict(MapStatus.NOT_AS, "one_sided", f"{m}x{n}", min(v.margin, -1e-9) if not math.isnan(v.margin) else -1.0, witness)


def unital_concat_preserves(v: MapVerdict, outer_unital: bool) -> MapVerdict:
    """Unital post-processing keeps AS: outputs are majorised by inputs."""
    if v.status is MapStatus.AS and outer_unital:
        return MapVerdict(MapStatus.AS, "majorization", v.partition, v.margin)
    return MapVerdict(MapStatus.UNDETERMINED, "majorization", v.partition)


def depolarizing_bell_negativity(q: float, dim: int) -> float:
    """Min partial-transpose eigenvalue of D_q applied to a two-level Bell pair."""
    return (1 - q) / dim - q / 2


def covariant_ea_equivalence(c: ch.Depolarizing, part: Bipartition) -> MapVerdict:
    """Global depolarizing on m|n: AS iff q <= 2/(mn + 2)."""
    if c.d != part.dim:
        raise ContractError(f"depolarizing dimension {c.d} does not match partition {part}")
    c.validate()
    margin = 2.0 / (part.dim + 2) - c.q
    if margin >= -BOUNDARY_TOL:
        return MapVerdict(MapStatus.AS, "covariant_ea", str(part), margin)
    psi = maximally_entangled(part.m, part.n, 2)
    out = c._apply(projector(psi))
    neg = float(np.linalg.eigvalsh(partial_transpose(out, part.m, part.n))[0])
    witness = {"input": "Bell pair on levels 0, 1", "unitary": "identity", "ppt_min_eigenvalue": neg}
    return MapVerdict(MapStatus.NOT_AS, "covariant_ea", str(part), margin, witness)


def _stability_thresholds(norm: ch.NormEstimate | None, entropy: ch.EntropyEstimate | None, d: int) -> list[tuple[str, float]]:
    out = []
    if norm is not None:
        gap = d * norm.value - 1
        if gap > 1e-12:
            out.append(("purity", 8.0 / gap + 1))
    if entropy is not None:
        gap = math.log(d) - entropy.value
        if gap > 1e-12:
            out.append(("entropy", 8.0 * ((math.log(d) + 1) / gap) ** 2 + 1))
    return out


def tensor_stability_bound(d: int, N: int, norm: ch.NormEstimate | None = None,
                           entropy: ch.EntropyEstimate | None = None) -> MapVerdict:
    """Phi^{(x)N} is NotAS for some bipartition once N exceeds either
    8/(d P - 1) + 1 (P = maximal purity) or 8((log d + 1)/(log d - h))^2 + 1.

    Only the tracing map (P = 1/d, h = log d) escapes both bounds.
    """
    if norm is None and entropy is None:
        raise ContractError("need a purity or an entropy estimate")
    bounds = _stability_thresholds(norm, entropy, d)
    if not bounds:
        return MapVerdict(MapStatus.UNDETERMINED, "tensor_stability", f"{d}^{N}", math.inf)
    name, b = min(bounds, key=lambda t: t[1])
    margin = b - N
    witness = {"N": N, "bound": b, "via": name, "input": "product of maximisers"}
    return _necessary(margin, "tensor_stability", f"{d}^{N}", witness)


def min_unstable_power(d: int, norm: ch.NormEstimate | None = None,
                       entropy: ch.EntropyEstimate | None = None) -> int | None:
    """Smallest N flagged by ``tensor_stability_bound``; None if never."""
    bounds = _stability_thresholds(norm, entropy, d)
    if not bounds:
        return None
    b = min(t[1] for t in bounds)
    N = math.floor(b + BOUNDARY_TOL) + 1
    return N


def tensor_factor_necessary(v: MapVerdict) -> tuple[MapVerdict, MapVerdict]:
    """AS of Phi1 (x) Phi2 w.r.t. m1 m2 | n1 n2 passes to both factors.

    The converse does not hold, so anything but AS gives no information.
    """
    if v.status is MapStatus.AS:
        f = MapVerdict(MapStatus.AS, "tensor_factor", v.partition, v.margin)
        return f, f
    u = MapVerdict(MapStatus.UNDETERMINED, "tensor_factor", v.partition)
    return u, u


# --- dispatcher -------------------------------------------------------------


def _qubit_dep_params(c: ch.Channel) -> list[float] | None:
    if not isinstance(c, ch.LocalProduct):
        return None
    qs = []
    for f in c.factors:
        if isinstance(f, ch.Depolarizing) and f.d == 2:
            qs.append(f.q)
        elif isinstance(f, ch.TracingMap) and f.d == 2:
            qs.append(0.0)
        else:
            return None
    return qs


def _unital_params(c: ch.Channel) -> list[tuple[float, float, float]] | None:
    if not isinstance(c, ch.LocalProduct):
        return None
    out = [ch._qubit_unital_lambdas(f) for f in c.factors]
    return None if any(l is None for l in out) else out


def _exact_tests(c: ch.Channel, part) -> list[Callable[[], MapVerdict]]:
    tests = []
    if isinstance(part, Bipartition):
        if isinstance(c, ch.Depolarizing):
            tests.append(lambda: covariant_ea_equivalence(c, part))
        qs = _qubit_dep_params(c)
        if qs is not None and len(qs) == 2 and (part.m, part.n) == (2, 2):
            tests.append(lambda: local_dep_2q_exact(*qs))
        if isinstance(c, ch.TraceIdTranspose) and 2 in (part.m, part.n):
            tests.append(lambda: ctit_2n_exact(c.alpha, c.beta, part.dim // 2))
        if isinstance(c, ch.OneSided) and (part.m, part.n) == (c.inner.dim, c.id_dim):
            tests.append(lambda: one_sided_not_as(part.m, part.n, c.inner))
    return tests


def _sufficient_tests(c: ch.Channel, part, norm: ch.NormEstimate) -> list[Callable[[], MapVerdict]]:
    tests = []
    if isinstance(part, Bipartition):
        if isinstance(c, ch.TraceIdTranspose):
            tests.append(lambda: ctit_sufficient(c.alpha, c.beta, part))
        if isinstance(c, ch.BipartiteDepolarizing):
            tests.append(lambda: bipartite_dep_sufficient(c.alpha, c.beta, c.gamma, part))
        if not norm.lower_bound_only:
            tests.append(lambda: ball_sufficient(norm, part))
    else:
        N = len(part.dims)
        if isinstance(c, ch.TraceIdTranspose) and part.is_qubits:
            tests.append(lambda: ctit_nqubit(c.alpha, c.beta, N))
        lams = _unital_params(c)
        if lams is not None and part.is_qubits and len(lams) == N:
            tests.append(lambda: nqubit_unital_sufficient(lams))
        if part.is_qubits and not norm.lower_bound_only:
            tests.append(lambda: nqubit_ball_sufficient(norm, N))
    return tests


def _necessary_tests(c: ch.Channel, part, norm: ch.NormEstimate) -> list[Callable[[], MapVerdict]]:
    tests = []
    cut = part if isinstance(part, Bipartition) else Bipartition(part.dims[0], part.dim // part.dims[0])
    qs = _qubit_dep_params(c)
    if qs is not None and len(qs) >= 2 and len(set(map(abs, qs))) == 1:
        tests.append(lambda: nqubit_dep_not_as(qs[0], len(qs)))
    if isinstance(c, ch.TraceIdTranspose):
        tests.append(lambda: ctit_necessary(c.alpha, c.beta, c.d))
    if isinstance(c, ch.BipartiteDepolarizing):
        tests.append(lambda: bipartite_dep_necessary(c.alpha, c.beta, c.gamma, cut))
    if isinstance(c, ch.Depolarizing) and isinstance(part, MultiPartition):
        tests.append(lambda: covariant_ea_equivalence(c, cut))
    tests.append(lambda: anti_ball_necessary(norm, cut, c))
    return tests


def classify_channel(c: ch.Channel, part: Bipartition | MultiPartition, seed: int = 0) -> MapVerdict:
    """Run the strongest applicable criteria and report which one decided.

    ``details["evaluated"]`` maps every criterion that ran to its status.
    """
    c.validate()
    if c.dim != part.dim:
        raise ContractError(f"map acts on dimension {c.dim}, partition {part} has dimension {part.dim}")
    evaluated: dict[str, str] = {}

    def run(tests, decisive):
        for t in tests:
            v = t()
            evaluated[v.criterion] = v.status.value
            if v.status in decisive:
                return v
        return None

    v = run(_exact_tests(c, part), (MapStatus.AS, MapStatus.NOT_AS))
    if v is None:
        norm = ch.max_output_purity(c, seed=seed)
        v = run(_sufficient_tests(c, part, norm), (MapStatus.AS,))
        if v is None:
            v = run(_necessary_tests(c, part, norm), (MapStatus.NOT_AS,))
    if v is None:
        return MapVerdict(MapStatus.UNDETERMINED, "none", str(part), details={"evaluated": evaluated})
    return MapVerdict(v.status, v.criterion, str(part), v.margin, v.witness, {"evaluated": evaluated, **v.details})


# --- criterion registry for sweeps ------------------------------------------


def _need(c, cls, name):
    if not isinstance(c, cls):
        raise ContractError(f"criterion {name} does not apply to family {c.family}")
    return c


def _reg_local_dep(fn):
    def run(c, part):
        qs = _qubit_dep_params(c)
        if qs is None or len(qs) != 2:
            raise ContractError("criterion needs a product of two qubit depolarizing maps")
        return fn(*qs)
    return run


def _reg_unital(c, part):
    lams = _unital_params(c)
    if lams is None or len(lams) != 2:
        raise ContractError("criterion needs a product of two unital qubit maps")
    return local_unital_sufficient(*lams)


def _reg_product_cp(c, part):
    v = ch.is_completely_positive(c)
    status = MapStatus.AS if v.status is Status.HOLDS else MapStatus.UNDETERMINED
    return MapVerdict(status, "completely_positive", str(part), v.margin)


def _reg_positive(c, part):
    try:
        c.validate()
    except ContractError:
        return MapVerdict(MapStatus.NOT_AS, "positive", str(part), -1.0)
    return MapVerdict(MapStatus.AS, "positive", str(part), 0.0)


def _n_qubits(d: int) -> int:
    N = d.bit_length() - 1
    if 2**N != d:
        raise ContractError(f"dimension {d} is not a power of two")
    return N


def _bipart(part) -> Bipartition:
    if isinstance(part, Bipartition):
        return part
    return Bipartition(part.dims[0], part.dim // part.dims[0])


CRITERIA: dict[str, Callable[[ch.Channel, Any], MapVerdict]] = {
    "dispatch": lambda c, p: classify_channel(c, p),
    "positive": _reg_positive,
    "completely_positive": _reg_product_cp,
    "ball": lambda c, p: ball_sufficient(ch.max_output_purity(c), _bipart(p)),
    "anti_ball": lambda c, p: anti_ball_necessary(ch.max_output_purity(c), _bipart(p)),
    "covariant_ea": lambda c, p: covariant_ea_equivalence(_need(c, ch.Depolarizing, "covariant_ea"), _bipart(p)),
    "local_dep_2q_exact": _reg_local_dep(local_dep_2q_exact),
    "local_dep_2q_sufficient": _reg_local_dep(local_dep_2q_sufficient),
    "local_unital_sufficient": _reg_unital,
    "ctit_sufficient": lambda c, p: ctit_sufficient(*_ab(c, "ctit_sufficient"), _bipart(p)),
    "ctit_2n_exact": lambda c, p: ctit_2n_exact(*_ab(c, "ctit_2n_exact"), c.d // 2),
    "ctit_necessary": lambda c, p: ctit_necessary(*_ab(c, "ctit_necessary"), c.d),
    "ctit_nqubit": lambda c, p: ctit_nqubit(*_ab(c, "ctit_nqubit"), _n_qubits(c.d)),
    "bipartite_dep_sufficient": lambda c, p: bipartite_dep_sufficient(*_abg(c, "bipartite_dep_sufficient"), _bipart(p)),
    "bipartite_dep_necessary": lambda c, p: bipartite_dep_necessary(*_abg(c, "bipartite_dep_necessary"), _bipart(p)),
}


def _ab(c, name):
    c = _need(c, ch.TraceIdTranspose, name)
    return c.alpha, c.beta


def _abg(c, name):
    c = _need(c, ch.BipartiteDepolarizing, name)
    return c.alpha, c.beta, c.gamma


def run_criterion(name: str, c: ch.Channel, part) -> MapVerdict:
    if name not in CRITERIA:
        raise ContractError(f"unknown criterion {name!r}; known: {', '.join(sorted(CRITERIA))}")
    return CRITERIA[name](c, part)
