"""Parametric channel and positive-map families.

Every family is an immutable dataclass that knows its input dimension,
validates its positivity region and serialises to a ``{"family": ...}``
JSON object.  Operations that are not family specific (superoperator, Choi
matrix, output purity and entropy optimisation) are module functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import ClassVar

import numpy as np

from .linalg import (
    PAULIS,
    ContractError,
    check_hermitian,
    hermitian_eigenvalues,
    maximally_entangled,
    partial_trace,
    random_pure_state,
    tensor,
)
from .mub import MubBasis, is_prime, mub_basis, weyl_operators
from .states import Status, Verdict

PARAM_TOL = 1e-12
TRACE_TOL = 1e-12


class UnknownFamily(ContractError):
    pass


class Channel:
    """Base class for all map families."""

    family: ClassVar[str] = ""
    unital: ClassVar[bool] = True

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def validate(self) -> None:
        """Raise ContractError naming the violated positivity bound."""

    def _apply(self, rho: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {"family": self.family, **self.params()}


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ContractError(message)


@dataclass(frozen=True)
class Depolarizing(Channel):
    """D_q[X] = q X + (1 - q) tr[X] I / d."""

    d: int
    q: float
    family: ClassVar[str] = "depolarizing"

    @property
    def dim(self) -> int:
        return self.d

    def validate(self) -> None:
        _require(self.d >= 2, "depolarizing map needs d >= 2")
        lo = -1.0 / (self.d - 1)
        _require(self.q >= lo - PARAM_TOL, f"depolarizing positivity bound q >= -1/(d-1) = {lo:.6g} violated (q={self.q})")
        _require(self.q <= 1 + PARAM_TOL, f"depolarizing positivity bound q <= 1 violated (q={self.q})")

    def _apply(self, rho):
        return self.q * rho + (1 - self.q) * np.trace(rho) * np.eye(self.d) / self.d

    def params(self):
        return {"d": self.d, "q": self.q}


def identity_channel(d: int) -> Depolarizing:
    return Depolarizing(d, 1.0)


@dataclass(frozen=True)
class TracingMap(Channel):
    """Tr[X] = tr[X] I / d."""

    d: int
    family: ClassVar[str] = "tracing"

    @property
    def dim(self) -> int:
        return self.d

    def _apply(self, rho):
        return np.trace(rho) * np.eye(self.d) / self.d

    def params(self):
        return {"d": self.d}


@dataclass(frozen=True)
class UnitalQubit(Channel):
    """Pauli-diagonal qubit map with eigenvalues (1, l1, l2, l3)."""

    l1: float
    l2: float
    l3: float
    family: ClassVar[str] = "unital_qubit"

    @property
    def dim(self) -> int:
        return 2

    @property
    def lambdas(self) -> tuple[float, float, float]:
        return (self.l1, self.l2, self.l3)

    def validate(self) -> None:
        for i, l in enumerate(self.lambdas, 1):
            _require(abs(l) <= 1 + PARAM_TOL, f"unital qubit positivity bound |l{i}| <= 1 violated (l{i}={l})")

    def _apply(self, rho):
        lam = (1.0,) + self.lambdas
        return 0.5 * sum(l * np.trace(P @ rho) * P for l, P in zip(lam, PAULIS))

    def params(self):
        return {"l1": self.l1, "l2": self.l2, "l3": self.l3}


@dataclass(frozen=True)
class GeneralizedPauli(Channel):
    """Pauli-diagonal channel constant on the axes of d + 1 MUBs."""

    d: int
    s: float
    t: tuple[float, ...]
    as_channel: bool = True
    family: ClassVar[str] = "generalized_pauli"

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(float(x) for x in self.t))

    @property
    def dim(self) -> int:
        return self.d

    @property
    def axis_weights(self) -> np.ndarray:
        """s + t_J for every axis J."""
        return self.s + np.asarray(self.t)

    def validate(self) -> None:
        _require(len(self.t) == self.d + 1, f"generalized Pauli needs {self.d + 1} axis weights, got {len(self.t)}")
        total = self.s + sum(self.t)
        _require(abs(total - 1) <= 1e-9, f"trace preservation s + sum(t) = 1 violated ({total:.12g})")
        if self.as_channel:
            _require(min(self.t) >= -PARAM_TOL, "complete positivity bound t_J >= 0 violated")
            lo = -1.0 / (self.d - 1)
            _require(self.s >= lo - PARAM_TOL, f"complete positivity bound s >= -1/(d-1) = {lo:.6g} violated")

    def _apply(self, rho):
        ops = _weyl_ops(self.d)
        out = ((self.d - 1) * self.s + 1) / self.d * rho
        per_axis = self.d - 1
        for J, tJ in enumerate(self.t):
            if tJ == 0:
                continue
            acc = sum(W @ rho @ W.conj().T for W in ops[J * per_axis : (J + 1) * per_axis])
            out = out + tJ / self.d * acc
        return out

    def params(self):
        return {"d": self.d, "s": self.s, "t": list(self.t)}


@lru_cache(maxsize=None)
def _weyl_ops(d: int) -> tuple[np.ndarray, ...]:
    return tuple(weyl_operators(mub_basis(d)))


@dataclass(frozen=True)
class TraceIdTranspose(Channel):
    """(tr[X] I + alpha X + beta X^T) / (d + alpha + beta)."""

    d: int
    alpha: float
    beta: float
    family: ClassVar[str] = "ctit"

    @property
    def dim(self) -> int:
        return self.d

    def validate(self) -> None:
        a, b = self.alpha, self.beta
        _require(1 + a >= -PARAM_TOL, f"positivity bound 1 + alpha >= 0 violated (alpha={a})")
        _require(1 + b >= -PARAM_TOL, f"positivity bound 1 + beta >= 0 violated (beta={b})")
        _require(1 + a + b >= -PARAM_TOL, f"positivity bound 1 + alpha + beta >= 0 violated ({1 + a + b:.6g})")

    def _apply(self, rho):
        num = np.trace(rho) * np.eye(self.d) + self.alpha * rho + self.beta * rho.T
        return num / (self.d + self.alpha + self.beta)

    def params(self):
        return {"d": self.d, "alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class BipartiteDepolarizing(Channel):
    """Combination of global and local depolarizing noise on m x n."""

    m: int
    n: int
    alpha: float
    beta: float
    gamma: float
    family: ClassVar[str] = "bipartite_depolarizing"

    @property
    def dim(self) -> int:
        return self.m * self.n

    @property
    def norm(self) -> float:
        return self.m * self.n + self.alpha * self.m + self.beta * self.n + self.gamma

    def validate(self) -> None:
        _require(self.norm > PARAM_TOL, f"normalisation mn + alpha m + beta n + gamma > 0 violated ({self.norm:.6g})")
        for name, spec in (("factorized", factorized_spectrum(self)), ("maximally entangled", entangled_spectrum(self))):
            _require(spec[-1] >= -1e-9, f"positivity violated: {name} input gives output eigenvalue {spec[-1]:.6g} < 0")

    def _apply(self, rho):
        m, n = self.m, self.n
        num = (
            np.trace(rho) * np.eye(m * n)
            + self.alpha * np.kron(np.eye(m), partial_trace(rho, m, n, "A"))
            + self.beta * np.kron(partial_trace(rho, m, n, "B"), np.eye(n))
            + self.gamma * rho
        )
        return num / self.norm

    def params(self):
        return {"m": self.m, "n": self.n, "alpha": self.alpha, "beta": self.beta, "gamma": self.gamma}


def factorized_spectrum(c: BipartiteDepolarizing) -> np.ndarray:
    """Output spectrum for a product pure input, normalised, decreasing."""
    m, n, a, b, g = c.m, c.n, c.alpha, c.beta, c.gamma
    vals = [1 + a + b + g] + [1 + a] * (m - 1) + [1 + b] * (n - 1) + [1.0] * ((m - 1) * (n - 1))
    return np.sort(np.array(vals) / c.norm)[::-1]


def entangled_spectrum(c: BipartiteDepolarizing) -> np.ndarray:
    """Output spectrum for the maximally entangled input on min(m, n) levels.

    Outside the k x k block (k = min(m, n)) only the local term of the
    smaller side survives, so for m != n those levels sit at 1 + beta/m
    (m < n) or 1 + alpha/n (n < m).
    """
    m, n, a, b, g = c.m, c.n, c.alpha, c.beta, c.gamma
    k = min(m, n)
    block = [1 + (a + b) / k + g] + [1 + (a + b) / k] * (k * k - 1)
    if m < n:
        rest = [1 + b / m] * (m * n - k * k)
    elif n < m:
        rest = [1 + a / n] * (m * n - k * k)
    else:
        rest = []
    return np.sort(np.array(block + rest) / c.norm)[::-1]


@dataclass(frozen=True)
class LocalProduct(Channel):
    """Tensor product of maps acting on consecutive factors."""

    factors: tuple[Channel, ...]
    family: ClassVar[str] = "local_product"

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        _require(len(self.factors) >= 1, "local product needs at least one factor")

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    @property
    def unital(self) -> bool:  # type: ignore[override]
        return all(f.unital for f in self.factors)

    def validate(self) -> None:
        for f in self.factors:
            f.validate()

    def _apply(self, rho):
        return _apply_local([_factor_tensor(f) for f in self.factors], self.dims, rho)

    def params(self):
        return {"factors": [f.to_dict() for f in self.factors]}


@dataclass(frozen=True)
class OneSided(Channel):
    """inner (x) Id_{id_dim}."""

    inner: Channel
    id_dim: int
    family: ClassVar[str] = "one_sided"

    @property
    def dim(self) -> int:
        return self.inner.dim * self.id_dim

    @property
    def unital(self) -> bool:  # type: ignore[override]
        return self.inner.unital

    def validate(self) -> None:
        _require(self.id_dim >= 2, "identity factor needs dimension >= 2")
        self.inner.validate()

    def as_product(self) -> LocalProduct:
        return LocalProduct((self.inner, identity_channel(self.id_dim)))

    def _apply(self, rho):
        return self.as_product()._apply(rho)

    def params(self):
        return {"inner": self.inner.to_dict(), "id_dim": self.id_dim}


def _apply_local(tensors, dims, rho):
    N = len(dims)
    t = np.asarray(rho).reshape(list(dims) * 2)
    for k, T in enumerate(tensors):
        t = np.tensordot(T, t, axes=([2, 3], [k, N + k]))
        t = np.moveaxis(t, [0, 1], [k, N + k])
    D = math.prod(dims)
    return t.reshape(D, D)


@lru_cache(maxsize=256)
def _factor_tensor(c: Channel) -> np.ndarray:
    """T[a, b, i, j] = c(|i><j|)[a, b]."""
    d = c.dim
    T = np.empty((d, d, d, d), dtype=complex)
    E = np.zeros((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            E[i, j] = 1.0
            T[:, :, i, j] = c._apply(E)
            E[i, j] = 0.0
    T.setflags(write=False)
    return T


FAMILIES: dict[str, type[Channel]] = {
    cls.family: cls
    for cls in (Depolarizing, TracingMap, UnitalQubit, GeneralizedPauli, TraceIdTranspose,
                BipartiteDepolarizing, LocalProduct, OneSided)
}


def channel_from_dict(obj: dict) -> Channel:
    """Inverse of ``Channel.to_dict``."""
    if not isinstance(obj, dict) or "family" not in obj:
        raise UnknownFamily("channel spec must be an object with a 'family' key")
    fam = obj["family"]
    p = {k: v for k, v in obj.items() if k != "family"}
    try:
        if fam == "local_product":
            return LocalProduct(tuple(channel_from_dict(f) for f in p["factors"]))
        if fam == "one_sided":
            return OneSided(channel_from_dict(p["inner"]), int(p["id_dim"]))
        if fam == "generalized_pauli":
            return GeneralizedPauli(int(p["d"]), float(p["s"]), tuple(p["t"]), bool(p.get("as_channel", True)))
        cls = FAMILIES[fam]
    except KeyError as exc:
        raise UnknownFamily(f"unknown family or missing parameter: {exc}") from exc
    ints = {"d", "m", "n"}
    try:
        kwargs = {k: (int(v) if k in ints else float(v)) for k, v in p.items()}
        return cls(**kwargs)
    except TypeError as exc:
        raise UnknownFamily(f"bad parameters for {fam}: {exc}") from exc


def apply(c: Channel, rho) -> np.ndarray:
    """Apply a map to a density matrix after validating parameters."""
    c.validate()
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (c.dim, c.dim):
        raise ContractError(f"{c.family} acts on dimension {c.dim}, got {rho.shape}")
    return c._apply(rho)


def superoperator_matrix(c: Channel) -> np.ndarray:
    """d^2 x d^2 matrix acting on column-stacked vec(rho)."""
    c.validate()
    d = c.dim
    return np.ascontiguousarray(_transfer_tensor(c).transpose(1, 0, 3, 2).reshape(d * d, d * d))


def _transfer_tensor(c: Channel) -> np.ndarray:
    if isinstance(c, LocalProduct):
        dims = c.dims
        D = c.dim
        tensors = [_factor_tensor(f) for f in c.factors]
        T = np.empty((D, D, D, D), dtype=complex)
        E = np.zeros((D, D), dtype=complex)
        for i in range(D):
            for j in range(D):
                E[i, j] = 1.0
                T[:, :, i, j] = _apply_local(tensors, dims, E)
                E[i, j] = 0.0
        return T
    if isinstance(c, OneSided):
        return _transfer_tensor(c.as_product())
    return _factor_tensor(c)


def vec(X) -> np.ndarray:
    return np.asarray(X).reshape(-1, order="F")


def unvec(v, d: int) -> np.ndarray:
    return np.asarray(v).reshape(d, d, order="F")


def choi_matrix(c: Channel) -> np.ndarray:
    """sum_ij |i><j| (x) c(|i><j|)."""
    c.validate()
    d = c.dim
    return _transfer_tensor(c).transpose(2, 0, 3, 1).reshape(d * d, d * d)


def is_completely_positive(c: Channel, tol: float = 1e-9) -> Verdict:
    lam_min = float(hermitian_eigenvalues(check_hermitian(choi_matrix(c), tol=1e-9))[-1])
    status = Status.HOLDS if lam_min >= -tol else Status.FAILS
    return Verdict(status, "choi", lam_min)


def axis_output(c: GeneralizedPauli, J: int, k: int) -> np.ndarray:
    """Output for the axis state |psi_k^J> (J = 1..d+1, k = 1..d)."""
    d = c.d
    if not (1 <= J <= d + 1 and 1 <= k <= d):
        raise ContractError(f"axis index (J={J}, k={k}) out of range for d={d}")
    w = c.s + c.t[J - 1]
    psi = mub_basis(d).bases[J - 1][:, k - 1]
    return (1 - w) * np.eye(d) / d + w * np.outer(psi, psi.conj())


# --- maximal output purity / minimal output entropy -------------------------


@dataclass(frozen=True)
class NormEstimate:
    """Squared 1->2 norm, i.e. maximal output purity.

    ``argmax`` is an input vector achieving ``value`` when known.
    """

    value: float
    method: str
    lower_bound_only: bool
    argmax: np.ndarray | None = field(default=None, compare=False)


@dataclass(frozen=True)
class EntropyEstimate:
    value: float
    method: str
    upper_bound_only: bool
    argmin: np.ndarray | None = field(default=None, compare=False)


def _basis_vec(d: int, i: int = 0) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


_PAULI_PLUS = (
    np.array([1, 1]) / np.sqrt(2),
    np.array([1, 1j]) / np.sqrt(2),
    np.array([1, 0]),
)


def _qubit_unital_lambdas(c: Channel) -> tuple[float, float, float] | None:
    if isinstance(c, UnitalQubit):
        return c.lambdas
    if isinstance(c, Depolarizing) and c.d == 2:
        return (c.q, c.q, c.q)
    if isinstance(c, TracingMap) and c.d == 2:
        return (0.0, 0.0, 0.0)
    return None


def closed_form_purity(c: Channel) -> tuple[float, np.ndarray | None] | None:
    """Exact maximal output purity and a maximiser, or None if unknown."""
    if isinstance(c, Depolarizing):
        return (1 + (c.d - 1) * c.q**2) / c.d, _basis_vec(c.d)
    if isinstance(c, TracingMap):
        return 1.0 / c.d, _basis_vec(c.d)
    if isinstance(c, UnitalQubit):
        sq = np.square(c.lambdas)
        j = int(np.argmax(sq))
        return (1 + sq[j]) / 2, _PAULI_PLUS[j].astype(complex)
    if isinstance(c, GeneralizedPauli):
        if not c.as_channel:
            return None
        w = c.axis_weights
        J = int(np.argmax(w**2))
        psi = mub_basis(c.d).bases[J][:, 0].copy() if is_prime(c.d) else None
        return (1 + (c.d - 1) * w[J] ** 2) / c.d, psi
    if isinstance(c, TraceIdTranspose):
        d, a, b = c.d, c.alpha, c.beta
        s = a + b
        real_in = (d + 2 * s + 2 * a * b + a * a + b * b) / (d + s) ** 2
        cplx_in = (d + 2 * s + a * a + b * b) / (d + s) ** 2
        if real_in >= cplx_in:
            return real_in, _basis_vec(d)
        psi = (_basis_vec(d, 0) + 1j * _basis_vec(d, 1)) / np.sqrt(2)
        return cplx_in, psi
    if isinstance(c, BipartiteDepolarizing):
        k = min(c.m, c.n)
        prod_val = bipartite_output_purity(c, 1.0)
        ent_val = bipartite_output_purity(c, 1.0 / k)
        if prod_val >= ent_val:
            return prod_val, _basis_vec(c.dim)
        return ent_val, maximally_entangled(c.m, c.n)
    if isinstance(c, LocalProduct):
        return _local_product_purity(c)
    return None


def _local_product_purity(c: LocalProduct):
    lams = [_qubit_unital_lambdas(f) for f in c.factors]
    two_qubit_unital = len(c.factors) <= 2 and all(l is not None for l in lams)
    if not two_qubit_unital:
        # multiplicativity is only known for CP depolarizing / unital qubit factors
        for f in c.factors:
            if not isinstance(f, (Depolarizing, TracingMap, UnitalQubit)):
                return None
            if is_completely_positive(f).status is not Status.HOLDS:
                return None
    value = 1.0
    vecs = []
    for f in c.factors:
        v, psi = closed_form_purity(f)
        value *= v
        vecs.append(psi)
    return value, tensor(*[p.reshape(-1, 1) for p in vecs]).ravel()


def bipartite_output_purity(c: BipartiteDepolarizing, mu: float) -> float:
    """Output purity for a pure input whose reductions have purity mu."""
    m, n, a, b, g = c.m, c.n, c.alpha, c.beta, c.gamma
    num = m * n + 2 * (a * m + b * n + a * b + g) + g * g + (a * a * m + b * b * n + 2 * g * (a + b)) * mu
    return num / c.norm**2


def _batched_outputs(S, psis, d):
    rho = psis[:, :, None] * psis.conj()[:, None, :]
    out_vec = rho.transpose(0, 2, 1).reshape(len(psis), d * d) @ S.T
    return out_vec, out_vec.reshape(-1, d, d).transpose(0, 2, 1)


def _adjoint(S, out_vec, d):
    G = (out_vec @ S.conj()).reshape(-1, d, d).transpose(0, 2, 1)
    return (G + G.conj().transpose(0, 2, 1)) / 2


def _starts(d: int, rng: np.random.Generator, starts: int) -> np.ndarray:
    psis = np.stack([random_pure_state(d, rng) for _ in range(starts)])
    return np.concatenate([np.eye(d, dtype=complex)[:1], psis])


def numeric_max_purity(c: Channel, seed: int = 0, starts: int = 64,
                       rtol: float = 1e-10, max_iter: int = 10_000) -> NormEstimate:
    """Multi-start ascent of tr[c(|psi><psi|)^2] over pure inputs.

    Each step replaces psi by the top eigenvector of the gradient
    c^dag(c(rho)); purity is convex in rho, so the value never decreases.
    """
    S = superoperator_matrix(c)
    d = c.dim
    psis = _starts(d, np.random.default_rng(seed), starts)
    prev = np.full(len(psis), -np.inf)
    active = np.ones(len(psis), dtype=bool)
    for _ in range(max_iter):
        out_vec, out = _batched_outputs(S, psis[active], d)
        f = np.sum(np.abs(out_vec) ** 2, axis=1)
        idx = np.flatnonzero(active)
        done = f - prev[idx] <= rtol * np.abs(f)
        prev[idx] = f
        G = _adjoint(S, out_vec, d)
        _, V = np.linalg.eigh(G)
        upd = idx[~done]
        psis[upd] = V[~done, :, -1]
        active[idx[done]] = False
        if not active.any():
            break
    best = int(np.argmax(prev))
    value = float(min(max(prev[best], 1.0 / d), 1.0))
    return NormEstimate(value, "numeric", True, psis[best].copy())


def max_output_purity(c: Channel, seed: int = 0, numeric: bool = False) -> NormEstimate:
    """Maximal output purity, closed form when available."""
    c.validate()
    if not numeric:
        cf = closed_form_purity(c)
        if cf is not None:
            value, psi = cf
            return NormEstimate(float(value), "closed_form", False, psi)
    return numeric_max_purity(c, seed=seed)


def numeric_min_entropy(c: Channel, seed: int = 0, starts: int = 64,
                        rtol: float = 1e-10, max_iter: int = 10_000) -> EntropyEstimate:
    """Multi-start descent of the output entropy over pure inputs.

    Entropy is concave in rho, so stepping to the top eigenvector of
    c^dag(log c(rho)) never increases it.
    """
    S = superoperator_matrix(c)
    d = c.dim
    psis = _starts(d, np.random.default_rng(seed), starts)
    prev = np.full(len(psis), np.inf)
    active = np.ones(len(psis), dtype=bool)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        _, out = _batched_outputs(S, psis[idx], d)
        out = (out + out.conj().transpose(0, 2, 1)) / 2
        w, U = np.linalg.eigh(out)
        w = np.clip(w, 1e-30, None)
        h = -np.sum(w * np.log(w), axis=1)
        done = prev[idx] - h <= rtol * np.maximum(np.abs(h), 1e-12)
        prev[idx] = h
        logout = (U * np.log(w)[:, None, :]) @ U.conj().transpose(0, 2, 1)
        G = _adjoint(S, logout.transpose(0, 2, 1).reshape(len(idx), d * d), d)
        _, V = np.linalg.eigh(G)
        upd = idx[~done]
        psis[upd] = V[~done, :, -1]
        active[idx[done]] = False
        if not active.any():
            break
    best = int(np.argmin(prev))
    value = float(min(max(prev[best], 0.0), math.log(d)))
    return EntropyEstimate(value, "numeric", True, psis[best].copy())


def min_output_entropy(c: Channel, seed: int = 0) -> EntropyEstimate:
    c.validate()
    if isinstance(c, TracingMap):
        return EntropyEstimate(math.log(c.d), "closed_form", False, _basis_vec(c.d))
    if isinstance(c, Depolarizing) and c.q >= -1.0 / (c.d**2 - 1):
        # covariance: every pure input gives the same output spectrum
        lam = np.array([c.q + (1 - c.q) / c.d] + [(1 - c.q) / c.d] * (c.d - 1))
        lam = lam[lam > 0]
        return EntropyEstimate(float(-np.sum(lam * np.log(lam))), "closed_form", False, _basis_vec(c.d))
    return numeric_min_entropy(c, seed=seed)
