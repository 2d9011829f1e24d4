"""Mutually unbiased bases and Weyl-type unitaries for prime dimensions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import ContractError


class UnsupportedDimension(ContractError):
    pass


def is_prime(d: int) -> bool:
    if d < 2:
        return False
    return all(d % p for p in range(2, int(d**0.5) + 1))


@dataclass(frozen=True, eq=False)
class MubBasis:
    """``bases[J][:, k]`` is the k-th vector of basis J (both zero-based)."""

    d: int
    bases: tuple[np.ndarray, ...]


@lru_cache(maxsize=None)
def mub_basis(d: int) -> MubBasis:
    """Computational basis plus d Fourier-type bases.

    Vector k of basis a has components tau^(a j (j + d)) omega^(k j) / sqrt(d)
    with tau = -exp(i pi / d), which covers d = 2 as well as odd primes.
    """
    if not is_prime(d):
        raise UnsupportedDimension(f"MUB construction needs a prime dimension, got {d}")
    omega = np.exp(2j * np.pi / d)
    tau = -np.exp(1j * np.pi / d)
    j = np.arange(d)
    bases = [np.eye(d, dtype=complex)]
    for a in range(d):
        B = np.empty((d, d), dtype=complex)
        for k in range(d):
            B[:, k] = tau ** (a * j * (j + d)) * omega ** (k * j) / np.sqrt(d)
        bases.append(B)
    for B in bases:
        B.setflags(write=False)
    return MubBasis(d, tuple(bases))


def weyl_operator(b: MubBasis, J: int) -> np.ndarray:
    """W_J = sum_{k=1..d} omega^k |psi_k^J><psi_k^J| for J = 1..d+1."""
    if not 1 <= J <= b.d + 1:
        raise ContractError(f"basis index {J} outside 1..{b.d + 1}")
    B = b.bases[J - 1]
    omega = np.exp(2j * np.pi / b.d)
    phases = omega ** np.arange(1, b.d + 1)
    return (B * phases) @ B.conj().T


def weyl_operators(b: MubBasis) -> list[np.ndarray]:
    """All d^2 - 1 powers W_J^j, j = 1..d-1, ordered by J then j."""
    out = []
    for J in range(1, b.d + 2):
        W = weyl_operator(b, J)
        P = np.eye(b.d, dtype=complex)
        for _ in range(1, b.d):
            P = P @ W
            out.append(P.copy())
    return out
