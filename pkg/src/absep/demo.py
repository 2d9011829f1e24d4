"""Reference checks with known answers, run by ``absep demo``."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import channels as ch
from . import classifier as cl
from .classifier import MapStatus
from .linalg import random_pure_state
from .states import (
    GHZ_BOUNDARY_WEIGHTS,
    Bipartition,
    MultiPartition,
    Status,
    abs_ppt_2n,
    classify_state,
    ghz_diagonal_state,
    purity_necessary,
)
from .witness import rotated_product_output, product_rotation_witness, ppt_negativity

Check = Callable[[], tuple[bool, str]]

AS, NOT_AS, UND = MapStatus.AS, MapStatus.NOT_AS, MapStatus.UNDETERMINED


def _ghz() -> tuple[bool, str]:
    v = abs_ppt_2n(GHZ_BOUNDARY_WEIGHTS)
    w = classify_state(ghz_diagonal_state(), Bipartition(2, 4))
    return v.status is Status.HOLDS and abs(v.margin) <= 1e-12 and w.status is Status.HOLDS, f"margin {v.margin:.2e}"


def _purity_2q() -> tuple[bool, str]:
    p = Bipartition(2, 2)
    hi, lo = purity_necessary(0.537, p), purity_necessary(0.535, p)
    ok = hi.status is Status.FAILS and lo.status is not Status.FAILS
    return ok, f"(sqrt3 - 1)^2 = {(math.sqrt(3) - 1) ** 2:.4f}"


def _q_star() -> tuple[bool, str]:
    q = cl.q_star()
    ok = (round(q, 4) == 0.3966 and cl.local_dep_2q_exact(q - 1e-6, q - 1e-6).status is AS
          and cl.local_dep_2q_exact(q + 1e-6, q + 1e-6).status is NOT_AS)
    return ok, f"q* = {q:.6f}"


def _contact() -> tuple[bool, str]:
    worst = 0.0
    for a in (1 / math.sqrt(5), -1 / math.sqrt(5)):
        for b in (1 / 3, -1 / 3):
            for q1, q2 in ((a, b), (b, a)):
                worst = max(worst, abs(cl.local_dep_2q_exact(q1, q2).margin),
                            abs(cl.local_dep_2q_sufficient(q1, q2).margin))
    return worst < 1e-12, f"max |margin| {worst:.1e}"


def _q2_high() -> tuple[bool, str]:
    return cl.local_dep_2q_exact(0.0, 0.8).status is NOT_AS and cl.local_dep_2q_exact(0.0, 0.7).status is AS, "q2 > 1/sqrt2"


def _suff_gap() -> tuple[bool, str]:
    ok = (cl.local_dep_2q_sufficient(0.39, 0.39).status is AS
          and cl.local_dep_2q_sufficient(0.395, 0.395).status is UND
          and cl.local_dep_2q_exact(0.395, 0.395).status is AS)
    return ok, f"sqrt(2/sqrt3 - 1) = {math.sqrt(2 / math.sqrt(3) - 1):.4f}"


def _nqubit_uniform() -> tuple[bool, str]:
    ok = True
    for N in range(3, 8):
        q = 21 * math.sqrt(2) / (17 * math.sqrt(N * 3**N))
        c = ch.LocalProduct((ch.Depolarizing(2, q),) * N)
        ok &= cl.nqubit_ball_sufficient(ch.max_output_purity(c), N).status is AS
    return ok, "N = 3..7"


def _nqubit_purity() -> tuple[bool, str]:
    qs = (0.1, -0.3, 0.5)
    c = ch.LocalProduct(tuple(ch.Depolarizing(2, q) for q in qs))
    expect = 2.0 ** -3 * math.prod(1 + q * q for q in qs)
    num = ch.numeric_max_purity(c).value
    return abs(num - expect) < 1e-8, f"{expect:.6f} vs numeric {num:.6f}"


def _unital_sym() -> tuple[bool, str]:
    l = math.sqrt(2 / math.sqrt(3) - 1)
    lam = (l, -0.5 * l, 0.2)
    return cl.local_unital_sufficient(lam, lam).status is AS, f"max lambda {l:.4f}"


def _gp_axis() -> tuple[bool, str]:
    c = ch.GeneralizedPauli(3, 0.1, (0.4, 0.2, 0.2, 0.1))
    norm = ch.max_output_purity(c)
    w = max(abs(x) for x in c.axis_weights)
    num = ch.numeric_max_purity(c).value
    ok = abs(norm.value - num) < 1e-6 and cl.ball_sufficient(norm, Bipartition(3, 3)).status is (AS if w <= 1 / 8 else UND)
    return ok, f"purity {norm.value:.6f}"


def _werner_holevo() -> tuple[bool, str]:
    ok = all(cl.ctit_2n_exact(0, -1, n).status is AS for n in range(2, 9))
    return ok and cl.ctit_necessary(0, -1).status is UND, "n = 2..8"


def _werner_holevo_output() -> tuple[bool, str]:
    rng = np.random.default_rng(3)
    psi = rng.standard_normal(5)
    psi /= np.linalg.norm(psi)
    P = np.outer(psi, psi)
    out = ch.apply(ch.TraceIdTranspose(5, 0, -1), P)
    err = np.abs(out - (np.eye(5) - P) / 4).max()
    return err < 1e-12, f"err {err:.1e}"


def _ctit_beta0() -> tuple[bool, str]:
    ok = True
    for D in (4, 6, 8, 9):
        p = Bipartition(2, D // 2) if D % 2 == 0 else Bipartition(3, 3)
        ok &= cl.ctit_sufficient(-1, 0, p).status is AS and cl.ctit_sufficient(D / (D - 2), 0, p).status is AS
        ok &= cl.ctit_sufficient(D / (D - 2) + 1e-3, 0, p).status is UND
    return ok, "stripe edge alpha = mn/(mn - 2)"


def _ctit_case_i() -> tuple[bool, str]:
    v = cl.ctit_2n_exact(1, 1, 4)
    return v.status is AS and abs(v.margin) < 1e-12 and cl.ctit_2n_exact(3, 0, 4).status is NOT_AS, "alpha + beta = 2"


def _global_dep() -> tuple[bool, str]:
    p = Bipartition(2, 2)
    ok = (cl.covariant_ea_equivalence(ch.Depolarizing(4, 1 / 3), p).status is AS
          and cl.covariant_ea_equivalence(ch.Depolarizing(4, 0.34), p).status is NOT_AS)
    return ok, "threshold 2/(mn + 2)"


def _product_rotation() -> tuple[bool, str]:
    w = product_rotation_witness()
    flat = ppt_negativity(rotated_product_output(rotate=False), Bipartition(4, 4))
    return w.negativity < -0.0235 and w.verify() and flat >= -1e-9, f"negativity {w.negativity:.4f}"


def _one_sided() -> tuple[bool, str]:
    c = ch.OneSided(ch.Depolarizing(3, 0.0), 2)
    return cl.classify_channel(c, Bipartition(3, 2)).status is NOT_AS, "Phi (x) Id"


def _tracing_stable() -> tuple[bool, str]:
    d = 3
    norm = ch.max_output_purity(ch.TracingMap(d))
    ent = ch.min_output_entropy(ch.TracingMap(d))
    ok = all(cl.tensor_stability_bound(d, N, norm, ent).status is not NOT_AS for N in (2, 10, 10**6))
    return ok and cl.min_unstable_power(d, norm, ent) is None, "never flagged"


def _depolarizing_cp() -> tuple[bool, str]:
    ok = True
    for d in (2, 3):
        lo = -1 / (d * d - 1)
        ok &= ch.is_completely_positive(ch.Depolarizing(d, lo)).status is Status.HOLDS
        ok &= ch.is_completely_positive(ch.Depolarizing(d, lo - 1e-3)).status is Status.FAILS
    return ok, "q >= -1/(d^2 - 1)"


def _bdep_reduction() -> tuple[bool, str]:
    p = Bipartition(2, 2)
    ok = True
    for g in (-0.5, 0.0, 1.0, 2.0, 2.01, 4.0):
        q = g / (4 + g)
        expect = AS if abs(q) <= 1 / 3 + 1e-12 else UND
        ok &= cl.bipartite_dep_sufficient(0, 0, g, p).status is expect
        ok &= cl.ball_sufficient(ch.max_output_purity(ch.Depolarizing(4, q)), p).status is expect
    return ok, "(0, 0, gamma) is D_q with q = gamma/(4 + gamma)"


def _nqubit_ball_state() -> tuple[bool, str]:
    rng = np.random.default_rng(0)
    psi = random_pure_state(8, rng)
    rho = 0.05 * np.outer(psi, psi.conj()) + 0.95 * np.eye(8) / 8
    return classify_state(rho, MultiPartition.qubits(3)).status is Status.HOLDS, "near-maximally mixed"


CHECKS: dict[str, tuple[str, Check]] = {
    "ghz": ("GHZ-diagonal state saturates the 2|4 test", _ghz),
    "purity_2q": ("two-qubit purity bound near 0.536", _purity_2q),
    "q_star": ("symmetric local depolarizing threshold 0.3966", _q_star),
    "contact": ("sufficient and exact regions touch at (1/sqrt5, 1/3)", _contact),
    "q2_high": ("D_0 (x) D_q2 not AS for q2 > 1/sqrt2", _q2_high),
    "suff_gap": ("gap between 0.3933 and 0.3966", _suff_gap),
    "nqubit_uniform": ("uniform depolarizing N-qubit threshold", _nqubit_uniform),
    "nqubit_purity": ("product purity 2^-N prod(1 + q^2)", _nqubit_purity),
    "unital_sym": ("unital product with max lambda^2 = 2/sqrt3 - 1", _unital_sym),
    "gp_axis": ("generalized Pauli axis purity", _gp_axis),
    "werner_holevo": ("Werner-Holevo channel is AS(2|n)", _werner_holevo),
    "werner_holevo_output": ("Werner-Holevo output (I - P)/(d - 1)", _werner_holevo_output),
    "ctit_beta0": ("beta = 0 edge matches |q| <= 1/(mn - 1)", _ctit_beta0),
    "ctit_case_i": ("alpha = beta = 1 on the exact boundary", _ctit_case_i),
    "global_dep": ("global depolarizing threshold 2/(mn + 2)", _global_dep),
    "product_rotation": ("AS factors with a non-AS product", _product_rotation),
    "one_sided": ("one-sided maps are never AS", _one_sided),
    "tracing_stable": ("tracing map is tensor stable", _tracing_stable),
    "depolarizing_cp": ("depolarizing complete positivity range", _depolarizing_cp),
    "bdep_reduction": ("bipartite depolarizing reduces to global", _bdep_reduction),
    "nqubit_ball_state": ("N-qubit ball on a noisy state", _nqubit_ball_state),
}


def run(only: str | None = None) -> list[tuple[str, str, bool, str]]:
    ids = list(CHECKS) if only is None else [only]
    out = []
    for i in ids:
        desc, fn = CHECKS[i]
        try:
            ok, info = fn()
        except Exception as exc:  # a crashing check is a failing check
            ok, info = False, f"error: {exc}"
        out.append((i, desc, bool(ok), info))
    return out
