"""Constructive refutation of absolute separability.

A witness is an input state and a global unitary such that the rotated
output of a map has a negative partial transpose.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from . import channels as ch
from .linalg import (
    ContractError,
    haar_unitary,
    is_unitary,
    maximally_entangled,
    partial_trace,
    partial_transpose,
    permutation_unitary,
    projector,
    random_pure_state,
    tensor,
)
from .states import Bipartition

NEGATIVITY_TOL = 1e-9
REFINE_STEPS = 200


def ppt_negativity(rho, part: Bipartition) -> float:
    """Smallest eigenvalue of the partial transpose on the B factor."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (part.dim, part.dim):
        raise ContractError(f"state of shape {rho.shape} does not match partition {part}")
    pt = partial_transpose(rho, part.m, part.n)
    return float(np.linalg.eigvalsh((pt + pt.conj().T) / 2)[0])


@dataclass(frozen=True, eq=False)
class Witness:
    channel: ch.Channel
    input: np.ndarray
    unitary: np.ndarray
    partition: Bipartition
    negativity: float
    recipe: str = ""
    trial: int = 0
    details: dict = field(default_factory=dict)

    def output(self) -> np.ndarray:
        out = ch.apply(self.channel, self.input)
        return self.unitary @ out @ self.unitary.conj().T

    def verify(self, tol: float = 1e-9) -> bool:
        """Re-run the pipeline and check the stored negativity."""
        if not is_unitary(self.unitary, tol=1e-9):
            return False
        neg = ppt_negativity(self.output(), self.partition)
        return abs(neg - self.negativity) <= tol and neg < -NEGATIVITY_TOL

    def to_dict(self) -> dict:
        return {
            "channel": self.channel.to_dict(),
            "partition": str(self.partition),
            "negativity": self.negativity,
            "recipe": self.recipe,
            "trial": self.trial,
        }


def _candidate_input(kind: int, part: Bipartition, rng: np.random.Generator) -> tuple[np.ndarray, str]:
    if kind == 0:
        return random_pure_state(part.dim, rng), "haar pure"
    if kind == 1:
        psi = np.kron(random_pure_state(part.m, rng), random_pure_state(part.n, rng))
        return psi, "factorized pure"
    return maximally_entangled(part.m, part.n), "maximally entangled"


def _rotated_negativity(out: np.ndarray, U: np.ndarray, part: Bipartition) -> float:
    return ppt_negativity(U @ out @ U.conj().T, part)


def _refine(out, U, neg, part, rng, steps=REFINE_STEPS):
    """Keep-if-better search with U <- exp(i eps H) U; eps halves on failure."""
    eps = 0.1
    D = part.dim
    for _ in range(steps):
        G = rng.standard_normal((D, D)) + 1j * rng.standard_normal((D, D))
        H = (G + G.conj().T) / 2
        H /= np.linalg.norm(H, 2)
        V = expm(1j * eps * H) @ U
        cand = _rotated_negativity(out, V, part)
        if cand < neg:
            U, neg = V, cand
        else:
            eps /= 2
    return U, neg


def random_unitary_witness(c: ch.Channel, part: Bipartition, trials: int = 100,
                           seed: int = 0, refine: bool = True) -> Witness | None:
    """Search inputs and global unitaries for a PPT violation.

    Trial 0 is a Bell pair with the identity unitary; later trials cycle
    through Haar, factorized and maximally entangled pure inputs paired with
    Haar unitaries.  The best trial (lowest index on ties) is refined.
    Returns None when nothing is found, which proves nothing.
    """
    if trials < 1:
        raise ContractError("need at least one trial")
    c.validate()
    if c.dim != part.dim:
        raise ContractError(f"map dimension {c.dim} does not match partition {part}")
    rng = np.random.default_rng(seed)
    S = ch.superoperator_matrix(c)
    D = part.dim
    best = None
    for t in range(trials):
        if t == 0:
            psi, recipe = maximally_entangled(part.m, part.n, 2), "bell pair, identity unitary"
            U = np.eye(D, dtype=complex)
        else:
            psi, recipe = _candidate_input((t - 1) % 3, part, rng)
            U = haar_unitary(D, rng)
        rho = projector(psi)
        out = ch.unvec(S @ ch.vec(rho), D)
        neg = _rotated_negativity(out, U, part)
        if best is None or neg < best[0]:
            best = (neg, t, rho, U, out, recipe)
    neg, t, rho, U, out, recipe = best
    if neg >= -NEGATIVITY_TOL:
        return None
    if refine:
        U, neg = _refine(out, U, neg, part, rng)
    neg = _rotated_negativity(out, U, part)
    return Witness(c, rho, U, part, neg, recipe, t)


# --- explicit constructions --------------------------------------------------

_CUT_ORDER = (0, 2, 1, 3)


def _rotation_parts():
    dep = ch.Depolarizing(4, 1 / 3)
    c = ch.LocalProduct((dep, dep))
    bell = maximally_entangled(2, 2)
    rho = projector(np.kron(bell, bell))
    U = np.eye(16, dtype=complex)
    s = 1 / np.sqrt(2)
    # a Hermitian reflection: the block with +s in both diagonal slots is singular
    U[7:9, 7:9] = [[s, -1j * s], [1j * s, -s]]
    # qubits are ordered (1, 2, 3, 4) with each map on (1, 2) and (3, 4);
    # the 4|4 cut groups (1, 3) against (2, 4), so reorder after rotating
    P = permutation_unitary((2, 2, 2, 2), _CUT_ORDER)
    return c, rho, U, P


def rotated_product_output(rotate: bool = True) -> np.ndarray:
    """Output of D_1/3 (x) D_1/3 on two Bell pairs, regrouped for the 4|4 cut."""
    c, rho, U, P = _rotation_parts()
    V = P @ U if rotate else P
    return V @ c._apply(rho) @ V.conj().T


def product_rotation_witness() -> Witness:
    """Two AS maps whose product is not AS(4|4)."""
    c, rho, U, P = _rotation_parts()
    V = P @ U
    part = Bipartition(4, 4)
    neg = _rotated_negativity(c._apply(rho), V, part)
    return Witness(c, rho, V, part, neg, "two Bell pairs, 2x2 block rotation on levels 7 and 8")


def recovery_requirement(q2: float, lam1: float, lam2: float) -> float:
    """q2^2 (l1 - l2)^2 - [1 + q2(2 l1 - 1)][1 + q2(2 l2 - 1)]; positive means recoverable."""
    return q2**2 * (lam1 - lam2) ** 2 - (1 + q2 * (2 * lam1 - 1)) * (1 + q2 * (2 * lam2 - 1))


def recovery_witness_one_sided(q2: float, rho) -> Witness | None:
    """Entangle the output of D_0 (x) D_q2 with a unitary built from the
    eigenvectors of the reduced state on the second qubit."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ContractError("recovery witness needs a two-qubit state")
    c = ch.LocalProduct((ch.Depolarizing(2, 0.0), ch.Depolarizing(2, q2)))
    c.validate()
    w, V = np.linalg.eigh(partial_trace(rho, 2, 2, "A"))
    lam1, lam2 = w[1], w[0]
    V = V[:, ::-1]
    if recovery_requirement(q2, lam1, lam2) <= 0:
        return None
    s = 1 / np.sqrt(2)
    e_p, e_m = s * np.exp(1j * np.pi / 4), s * np.exp(-1j * np.pi / 4)
    U0 = np.zeros((4, 4), dtype=complex)
    U0[0, 0] = U0[3, 3] = 1.0
    U0[1, 1] = U0[2, 2] = e_p
    U0[1, 2] = U0[2, 1] = e_m
    W = tensor(V, V)
    U = W @ U0 @ W.conj().T
    part = Bipartition(2, 2)
    neg = _rotated_negativity(c._apply(rho), U, part)
    if neg >= -NEGATIVITY_TOL:
        return None
    return Witness(c, rho, U, part, neg, "eigenbasis rotation of the reduced state")
