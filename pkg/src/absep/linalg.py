"""Dense complex linear algebra shared by every other module.

Index convention: for a bipartite space of dimension ``m * n`` the A factor is
the major (slow) index and B the minor (fast) one, matching ``np.kron``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-10
STATE_SUM_TOL = 1e-10
CLAMP_TOL = 1e-9
MAJORIZATION_TOL = 1e-12

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)


class ContractError(ValueError):
    """Raised when an input violates a documented precondition."""


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues in decreasing order.

    With ``state=True`` the values must sum to one; tiny negative values
    (eigensolver noise down to ``-CLAMP_TOL``) are clamped to zero and anything
    more negative is rejected.
    """

    values: np.ndarray
    state: bool = True

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float).ravel())[::-1]
        if v.size == 0 or not np.all(np.isfinite(v)):
            raise ContractError("spectrum must be a non-empty finite vector")
        if self.state:
            if abs(v.sum() - 1.0) > STATE_SUM_TOL:
                raise ContractError(f"state spectrum sums to {v.sum():.15g}, not 1")
            if v[-1] < -CLAMP_TOL:
                raise ContractError(f"state spectrum has negative value {v[-1]:.3g}")
            v = np.where(v < 0, 0.0, v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, k):
        return self.values[k]

    def __iter__(self):
        return iter(self.values)

    def __repr__(self) -> str:
        return f"Spectrum({np.array2string(self.values, precision=6)})"

    def tolist(self) -> list[float]:
        return [float(x) for x in self.values]


def as_spectrum(s, state: bool = True) -> Spectrum:
    if isinstance(s, Spectrum):
        return s
    return Spectrum(np.asarray(s, dtype=float), state=state)


def _check_square(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ContractError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ContractError("matrix has non-finite entries")
    return A


def check_hermitian(A, tol: float = HERMITIAN_TOL) -> np.ndarray:
    A = _check_square(A).astype(complex)
    dev = np.max(np.abs(A - A.conj().T))
    if dev > tol:
        raise ContractError(f"matrix is not Hermitian (max deviation {dev:.3g})")
    return A


def is_unitary(U, tol: float = UNITARY_TOL) -> bool:
    U = _check_square(U)
    return bool(np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0]))) <= tol)


def jacobi_eigh(A, tol: float = 1e-12, max_sweeps: int = 100):
    """Cyclic Jacobi eigensolver for complex Hermitian matrices.

    Each rotation first removes the phase of the pivot, then applies a real
    Givens rotation.  Returns ``(eigenvalues, eigenvectors)`` sorted
    decreasingly, eigenvectors as columns.
    """
    a = check_hermitian(A).copy()
    a = (a + a.conj().T) / 2
    d = a.shape[0]
    v = np.eye(d, dtype=complex)
    scale = np.linalg.norm(a)
    if d == 1 or scale == 0.0:
        w = a.diagonal().real.copy()
    else:
        for _ in range(max_sweeps):
            off = np.sqrt(max(np.linalg.norm(a) ** 2 - np.sum(np.abs(a.diagonal()) ** 2), 0.0))
            if off <= tol * scale:
                break
            for p in range(d - 1):
                for q in range(p + 1, d):
                    apq = a[p, q]
                    r = abs(apq)
                    if r <= 1e-300:
                        continue
                    phase = apq / r
                    zeta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                    t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                    c = 1.0 / np.sqrt(1.0 + t * t)
                    s = t * c
                    # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                    g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                    idx = [p, q]
                    a[:, idx] = a[:, idx] @ g
                    a[idx, :] = g.conj().T @ a[idx, :]
                    a[p, q] = a[q, p] = 0.0
                    v[:, idx] = v[:, idx] @ g
        else:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
        w = a.diagonal().real.copy()
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def hermitian_eigenvalues(A, vectors: bool = False, method: str = "lapack"):
    """Real eigenvalues of a Hermitian matrix, sorted decreasingly.

    The raw values are returned (no clamping), so genuine negativity survives.
    ``method="jacobi"`` uses the in-house solver instead of LAPACK.
    """
    A = check_hermitian(A)
    if method == "jacobi":
        w, V = jacobi_eigh(A)
    elif method == "lapack":
        if vectors:
            w, V = np.linalg.eigh(A)
            w, V = w[::-1], V[:, ::-1]
        else:
            w = np.linalg.eigvalsh(A)[::-1]
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    return (w, V) if vectors else w


def spectrum_of(rho) -> Spectrum:
    """State spectrum of a density matrix."""
    return Spectrum(hermitian_eigenvalues(rho))


def tensor(*mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for M in mats:
        out = np.kron(out, np.asarray(M))
    return out


def _split_dims(rho, m: int, n: int) -> np.ndarray:
    rho = _check_square(rho)
    if rho.shape[0] != m * n:
        raise ContractError(f"dimension {rho.shape[0]} does not match partition {m}x{n}")
    return rho.reshape(m, n, m, n)


def partial_trace(rho, m: int, n: int, which: str = "B") -> np.ndarray:
    """Trace out subsystem ``which`` ("A" or "B") of an ``m x n`` operator."""
    t = _split_dims(rho, m, n)
    if which == "B":
        return np.einsum("ijkj->ik", t)
    if which == "A":
        return np.einsum("ijil->jl", t)
    raise ValueError("which must be 'A' or 'B'")


def partial_transpose(rho, m: int, n: int) -> np.ndarray:
    """Transpose the B factor in the computational basis."""
    return _split_dims(rho, m, n).transpose(0, 3, 2, 1).reshape(m * n, m * n)


def permute_subsystems(rho, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of an operator on ``prod(dims)``."""
    dims = list(dims)
    k = len(dims)
    t = np.asarray(rho).reshape(dims + dims)
    t = t.transpose(list(order) + [k + i for i in order])
    D = int(np.prod(dims))
    return t.reshape(D, D)


def permutation_unitary(dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Unitary P with P X P^dag == permute_subsystems(X, dims, order)."""
    D = int(np.prod(dims))
    basis = np.eye(D).reshape(list(dims) + [D])
    return basis.transpose(list(order) + [len(dims)]).reshape(D, D).astype(complex)


def haar_unitary(dim: int, seed: int | np.random.Generator = 0) -> np.ndarray:
    """Haar-distributed unitary via Ginibre sampling and phase-fixed QR."""
    if dim < 1:
        raise ContractError("dimension must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return psi / np.linalg.norm(psi)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Hilbert-Schmidt (or induced, for smaller rank) random state."""
    k = dim if rank is None else rank
    g = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    return np.outer(psi, psi.conj())


def maximally_entangled(m: int, n: int, k: int | None = None) -> np.ndarray:
    """(1/sqrt(k)) sum_i |i>|i> with k = min(m, n) by default."""
    k = min(m, n) if k is None else k
    psi = np.zeros(m * n, dtype=complex)
    for i in range(k):
        psi[i * n + i] = 1.0
    return psi / np.sqrt(k)


def majorizes(a, b, tol: float = MAJORIZATION_TOL) -> bool:
    """True iff every partial sum of sorted ``a`` dominates that of ``b``."""
    a = as_spectrum(a).values
    b = as_spectrum(b).values
    if a.size != b.size:
        raise ContractError("spectra must have equal length")
    return bool(np.all(np.cumsum(a) >= np.cumsum(b) - tol))


def purity(rho) -> float:
    rho = np.asarray(rho)
    # tr(rho^2) for Hermitian rho is the squared Frobenius norm
    return float(np.sum(np.abs(rho) ** 2))


def entropy(s) -> float:
    """Von Neumann entropy (natural log) of a state spectrum."""
    v = as_spectrum(s).values
    v = v[v > 0]
    return float(-np.sum(v * np.log(v)))


def ghz_basis_vector(k: int) -> np.ndarray:
    """|GHZ_k>, k = 1..8, with k - 1 = 4 k1 + 2 k2 + k3."""
    if not 1 <= k <= 8:
        raise ContractError("GHZ index runs from 1 to 8")
    b = k - 1
    bits = (b >> 2 & 1, b >> 1 & 1, b & 1)
    idx = 4 * bits[0] + 2 * bits[1] + bits[2]
    idx_bar = 7 - idx
    v = np.zeros(8, dtype=complex)
    v[idx] += (-1) ** (k - 1)
    v[idx_bar] += 1.0
    return v / np.sqrt(2.0)
