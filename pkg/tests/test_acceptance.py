"""The twelve end-to-end acceptance checks.

Each test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary and also when this file is run as a script.
"""

import math

import numpy as np
import pytest

from absep import channels as ch
from absep import classifier as cl
from absep.classifier import MapStatus
from absep.cli import main
from absep.linalg import (
    haar_unitary,
    hermitian_eigenvalues,
    majorizes,
    partial_transpose,
    random_density_matrix,
    spectrum_of,
)
from absep.states import (
    GHZ_BOUNDARY_WEIGHTS,
    Bipartition,
    Status,
    abs_ppt_2n,
    classify_state,
    ghz_diagonal_state,
    necessary_triple,
    purity_necessary,
)
from absep.sweep import PRESETS, SweepSpec, run_sweep
from absep.witness import rotated_product_output, product_rotation_witness, ppt_negativity, random_unitary_witness

AS, NOT_AS, UND = MapStatus.AS, MapStatus.NOT_AS, MapStatus.UNDETERMINED
RESULTS: dict[int, str] = {}


def report(n: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    RESULTS[n] = line
    print(line)
    assert ok, line


def test_01_symmetric_threshold():
    q = cl.q_star()
    below = cl.local_dep_2q_exact(q - 1e-6, q - 1e-6).status
    above = cl.local_dep_2q_exact(q + 1e-6, q + 1e-6).status
    ok = abs(2 * q**3 - 2 * q**2 + 3 * q - 1) < 1e-10 and round(q, 4) == 0.3966 and below is AS and above is NOT_AS
    report(1, "symmetric two-qubit depolarizing threshold", ok, f"q* = {q:.6f}")


@pytest.fixture(scope="module")
def dep_grid():
    spec = SweepSpec.from_dict(PRESETS["local-dep-2q"])
    recs = run_sweep(spec)
    steps = spec.axes[0].steps
    suff = np.array([r["local_dep_2q_sufficient"] == AS.value for r in recs]).reshape(steps, steps)
    exact = np.array([r["local_dep_2q_exact"] == AS.value for r in recs]).reshape(steps, steps)
    return spec, suff, exact


def _cell(spec, x):
    a = spec.axes[0]
    return int((x - a.lo) / (a.hi - a.lo) * a.steps)


def test_02_sufficient_inside_exact(dep_grid):
    spec, suff, exact = dep_grid
    violations = int(np.sum(suff & ~exact))
    contacts_ok = True
    for x in (1 / math.sqrt(5), -1 / math.sqrt(5)):
        for y in (1 / 3, -1 / 3):
            for px, py in ((x, y), (y, x)):
                i, j = _cell(spec, px), _cell(spec, py)
                for region in (suff, exact):
                    block = region[max(i - 1, 0) : i + 2, max(j - 1, 0) : j + 2]
                    contacts_ok &= bool(block.any() and not block.all())
    report(2, "sufficient region nested in exact region, 400x400", violations == 0 and contacts_ok,
           f"{violations} violating cells")


def test_03_product_rotation():
    w = product_rotation_witness()
    flat = ppt_negativity(rotated_product_output(rotate=False), Bipartition(4, 4))
    ok = w.negativity < -0.0235 and w.verify() and flat >= -1e-9
    report(3, "product of AS maps rotated into entanglement", ok, f"negativity {w.negativity:.4f}, unrotated {flat:.1e}")


def test_04_ghz_diagonal():
    v = abs_ppt_2n(GHZ_BOUNDARY_WEIGHTS)
    s = classify_state(ghz_diagonal_state(), Bipartition(2, 4))
    ok = v.status is Status.HOLDS and abs(v.margin) <= 1e-12 and s.status is Status.HOLDS
    report(4, "GHZ-diagonal state on the 2|4 boundary", ok, f"margin {v.margin:.1e}")


def test_05_two_qubit_purity():
    p = Bipartition(2, 2)
    ok = purity_necessary(0.537, p).status is Status.FAILS and purity_necessary(0.535, p).status is not Status.FAILS
    rng = np.random.default_rng(5)
    checked = misses = 0
    while checked < 10_000:
        lam = rng.dirichlet(np.full(4, 0.15), size=2000)
        for l in lam[np.sum(lam**2, axis=1) > 0.536]:
            if checked == 10_000:
                break
            checked += 1
            l = l / l.sum()
            mu = float(np.sum(l**2))
            if necessary_triple(l).status is not Status.FAILS and purity_necessary(mu, p).status is not Status.FAILS:
                misses += 1
    report(5, "two-qubit purity bound", ok and misses == 0, f"{checked} random spectra, {misses} misses")


def test_06_werner_holevo():
    ok = all(cl.ctit_2n_exact(0, -1, n).status is AS for n in range(2, 9))
    ok &= cl.ctit_necessary(0, -1).status is not NOT_AS
    ok &= all(cl.ctit_necessary(0, -1, 2 * n).status is not NOT_AS for n in range(2, 9))
    report(6, "Werner-Holevo channel", ok)


def test_07_global_depolarizing():
    p = Bipartition(2, 2)
    at = cl.covariant_ea_equivalence(ch.Depolarizing(4, 1 / 3), p).status
    past = cl.covariant_ea_equivalence(ch.Depolarizing(4, 1 / 3 + 1e-6), p).status
    w = random_unitary_witness(ch.Depolarizing(4, 0.34), p, trials=1, seed=0)
    oracle = (1 - 3 * 0.34) / 4
    ok = at is AS and past is NOT_AS and w is not None and w.negativity <= -0.004 and w.verify()
    ok &= abs(ppt_negativity(w.output(), p) - oracle) < 1e-9 if w is not None and w.trial == 0 else ok
    report(7, "global depolarizing exactness", ok, f"witness {w.negativity:.6f} vs oracle {oracle:.6f}" if w else "")


def _draws(rng):
    fams = {"unital_product": [], "depolarizing_product": [], "generalized_pauli": [], "bipartite_depolarizing": []}
    for _ in range(50):
        fams["unital_product"].append(ch.LocalProduct(tuple(ch.UnitalQubit(*rng.uniform(-1, 1, 3)) for _ in range(2))))
        if rng.random() < 0.5:
            qs = rng.uniform(-1, 1, 2)
        else:
            qs = rng.uniform(-1 / 3, 1, 3)
        fams["depolarizing_product"].append(ch.LocalProduct(tuple(ch.Depolarizing(2, q) for q in qs)))
        d = int(rng.choice([2, 3]))
        s = rng.uniform(-1 / (d - 1), 1)
        t = (1 - s) * rng.dirichlet(np.ones(d + 1))
        fams["generalized_pauli"].append(ch.GeneralizedPauli(d, s, tuple(t)))
        while True:
            m, n = (int(x) for x in rng.choice([2, 3], 2))
            c = ch.BipartiteDepolarizing(m, n, *rng.uniform(-1, 4, 3))
            try:
                c.validate()
                break
            except ch.ContractError:
                continue
        fams["bipartite_depolarizing"].append(c)
    return fams


def test_08_closed_form_vs_numeric():
    rng = np.random.default_rng(8)
    worst = {}
    for fam, cs in _draws(rng).items():
        errs = []
        for i, c in enumerate(cs):
            cf = ch.max_output_purity(c)
            assert cf.method == "closed_form", fam
            errs.append(abs(cf.value - ch.numeric_max_purity(c, seed=i).value))
        worst[fam] = max(errs)
    ok = all(e < 1e-6 for e in worst.values())
    report(8, "closed-form vs numeric maximal output purity", ok,
           ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_09_tensor_stability():
    tr = ch.TracingMap(2)
    norm, ent = ch.max_output_purity(tr), ch.min_output_entropy(tr)
    never = all(cl.tensor_stability_bound(2, N, norm, ent).status is not NOT_AS for N in range(2, 10**6 + 1, 997))
    never &= cl.tensor_stability_bound(2, 10**6, norm, ent).status is not NOT_AS
    ident = ch.max_output_purity(ch.identity_channel(2))
    idn = [cl.tensor_stability_bound(2, N, ident).status for N in range(2, 200)]
    ident_ok = all((s is NOT_AS) == (N >= 10) for N, s in zip(range(2, 200), idn))
    finite = True
    for c in (ch.Depolarizing(2, 0.5), ch.Depolarizing(3, -0.2), ch.UnitalQubit(0.1, 0.2, -0.05),
              ch.TraceIdTranspose(3, 1.0, 0.5), ch.GeneralizedPauli(3, 0.0, (0.1, 0.2, 0.3, 0.4))):
        nrm = ch.max_output_purity(c)
        N = cl.min_unstable_power(c.dim, nrm)
        finite &= nrm.value > 1 / c.dim and N is not None
        finite &= cl.tensor_stability_bound(c.dim, N, nrm).status is NOT_AS
        finite &= cl.tensor_stability_bound(c.dim, N - 1, nrm).status is not NOT_AS
    dep = cl.min_unstable_power(2, ch.max_output_purity(ch.Depolarizing(2, 0.5)))
    report(9, "tensor stability bounds", never and ident_ok and finite and dep == 34, f"depolarizing q=0.5 from N={dep}")


def test_10_ctit_nesting():
    spec = SweepSpec.from_dict(PRESETS["ctit-2x4"])
    recs = run_sweep(spec)
    inside = [r for r in recs if r["positive"] == AS.value]
    bad = 0
    for r in inside:
        if r["ctit_sufficient"] == AS.value and r["ctit_2n_exact"] != AS.value:
            bad += 1
        if r["ctit_2n_exact"] == AS.value and r["ctit_necessary"] == NOT_AS.value:
            bad += 1
    ok = bad == 0 and len(recs) == 300 * 300 and len(inside) > 0
    report(10, "nested regions for the trace/identity/transpose family at mn=8", ok,
           f"{len(inside)} positive cells, {bad} violations")


def test_11_property_suites():
    rng = np.random.default_rng(11)
    fails = 0
    for _ in range(1000):
        d = int(rng.integers(2, 9))
        A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        H = A + A.conj().T
        fails += abs(hermitian_eigenvalues(H).sum() - np.trace(H).real) > 1e-9
        m, n = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        rho = random_density_matrix(m * n, rng)
        fails += np.abs(partial_transpose(partial_transpose(rho, m, n), m, n) - rho).max() > 1e-12
        U = haar_unitary(d, rng)
        fails += np.abs(U @ U.conj().T - np.eye(d)).max() > 1e-10
        sigma = random_density_matrix(d, rng)
        fails += np.abs(spectrum_of(U @ sigma @ U.conj().T).values - spectrum_of(sigma).values).max() > 1e-10
    maj_fails = 0
    for i in range(1000):
        kind = i % 3
        if kind == 0:
            c = ch.Depolarizing(3, rng.uniform(-0.5, 1))
        elif kind == 1:
            c = ch.UnitalQubit(*rng.uniform(-1, 1, 3))
        else:
            s = rng.uniform(0, 1)
            c = ch.GeneralizedPauli(2, s, tuple((1 - s) * rng.dirichlet(np.ones(3))))
        rho = random_density_matrix(c.dim, rng)
        maj_fails += not majorizes(spectrum_of(rho), spectrum_of(ch.apply(c, rho)), tol=1e-10)
    report(11, "linear-algebra and majorization property suites", fails == 0 and maj_fails == 0,
           f"{fails} invariant failures, {maj_fails} majorization failures")


def test_12_sweep_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    rc = [main(["sweep", "--preset", "bdep-2x2", "--seed", "7", "--out", str(p)]) for p in (a, b)]
    ok = rc == [0, 0] and a.read_bytes() == b.read_bytes() and len(a.read_bytes()) > 0
    report(12, "byte-identical sweep output", ok, f"{len(a.read_bytes())} bytes")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
