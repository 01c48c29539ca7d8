"""Acceptance suite: one test per criterion, at the stated tolerance.

Each test prints a single pass line with its worst observed residual, so
``pytest -s tests/test_acceptance.py`` doubles as a human-readable
acceptance report.  Every random draw is seeded; expected values come
from the brute-force oracle module or closed-form arithmetic only.
"""

import math
import time

import numpy as np
import pytest
from helpers import max_abs, random_density, random_hermitian, random_pauli
from scipy.linalg import expm

from seqmeas import (
    DensityMatrix,
    MeasurementSpec,
    PauliString,
    build_mixed_field_ising,
    calibrate_generalized_eigenvalues,
    canonical_detector,
    config_from_dict,
    distance_up_to_phase,
    generalized_eigenvalue,
    induced_kraus,
    informative_kraus,
    kraus_pair,
    nested_estimate,
    noninformative_kraus,
    oracle_nested,
    oracle_otoc,
    oracle_toc,
    otoc,
    otoc_value,
    propagator,
    run_experiment,
    sample_protocol,
    state_update,
    synthesize_measurement_circuit,
    time_reversed_evolution,
    toc,
    weak_value,
)
from seqmeas.protocols import MeasureStep

PI = math.pi


def phi_closed_open(rng):
    """Uniform draw from (0, pi/2]."""
    return PI / 2 * (1.0 - float(rng.uniform(0.0, 1.0)))


def report(number, name, detail):
    print(f"criterion {number:02d} {name}: {detail}: PASS")


def test_c01_povm_identity():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 4))
        p = random_pauli(rng, n)
        phi = phi_closed_open(rng)
        pair = informative_kraus(MeasurementSpec(p, phi, "informative"))
        e0, e1 = pair.effects()
        total = generalized_eigenvalue(phi, 0) * e0 + generalized_eigenvalue(phi, 1) * e1
        worst = max(worst, max_abs(total - p.matrix()))
    assert worst < 1e-10
    report(1, "POVM identity", f"max residual {worst:.3e} < 1e-10 over 200 draws")


def test_c02_isolation_identities():
    rng = np.random.default_rng(102)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 4))
        p = random_pauli(rng, n)
        a = p.matrix()
        rho = random_density(rng, n).matrix
        b = random_pauli(rng, n).matrix()
        phi = phi_closed_open(rng)
        alphas = [generalized_eigenvalue(phi, out) for out in (0, 1)]
        m = informative_kraus(MeasurementSpec(p, phi, "informative"))
        nn = noninformative_kraus(MeasurementSpec(p, phi, "noninformative"))
        worst = max(
            worst,
            max_abs(
                sum(alphas[o] * m[o] @ rho @ m[o].conj().T for o in (0, 1))
                - (a @ rho + rho @ a) / 2
            ),
            max_abs(
                sum(alphas[o] * nn[o] @ rho @ nn[o].conj().T for o in (0, 1))
                - (a @ rho - rho @ a) / 2j
            ),
            max_abs(
                sum(alphas[o] * m[o].conj().T @ b @ m[o] for o in (0, 1))
                - (b @ a + a @ b) / 2
            ),
            max_abs(
                sum(alphas[o] * nn[o].conj().T @ b @ nn[o] for o in (0, 1))
                - (b @ a - a @ b) / 2j
            ),
        )
    assert worst < 1e-10
    report(2, "isolation identities", f"max residual {worst:.3e} < 1e-10 over 200 draws")


def test_c03_strength_independence():
    # 50 random 3-qubit instances, 10 strength vectors each; exact values
    # must collapse to one number and match the brute-force correlators.
    # Angles are drawn from [0.15, pi/2]: the alpha products amplify
    # double-precision roundoff by prod(1/sin phi), so smaller angles test
    # conditioning, not the identity.
    rng = np.random.default_rng(103)
    ham = build_mixed_field_ising(3)
    worst_spread = 0.0
    worst_oracle = 0.0
    for _ in range(50):
        rho = random_density(rng, 3)
        pa, pb = random_pauli(rng, 3), random_pauli(rng, 3)
        u = propagator(ham, float(rng.uniform(0.0, 2.0)))
        ref_t = oracle_toc(rho.matrix, pa.matrix(), pb.matrix(), u.matrix)
        ref_f = oracle_otoc(rho.matrix, pa.matrix(), pb.matrix(), u.matrix)
        values = {"tr": [], "ti": [], "or": [], "oi": []}
        for _ in range(10):
            phis2 = rng.uniform(0.15, PI / 2, size=2)
            phis4 = rng.uniform(0.15, PI / 2, size=4)
            values["tr"].append(toc(rho, pa, pb, u, "real", phis2).value)
            values["ti"].append(toc(rho, pa, pb, u, "imag", phis2).value)
            values["or"].append(
                otoc_value("real", otoc(rho, pa, pb, u, part="real", phis=phis4).value)
            )
            values["oi"].append(
                otoc_value("imag", otoc(rho, pa, pb, u, part="imag", phis=phis4).value)
            )
        for key in values:
            worst_spread = max(worst_spread, max(values[key]) - min(values[key]))
        worst_oracle = max(
            worst_oracle,
            max(abs(v - ref_t.real) for v in values["tr"]),
            max(abs(v - ref_t.imag) for v in values["ti"]),
            max(abs(v - ref_f.real) for v in values["or"]),
            max(abs(v - ref_f.imag) for v in values["oi"]),
        )
    assert worst_spread < 1e-10
    assert worst_oracle < 1e-10
    report(
        3,
        "strength independence",
        f"spread {worst_spread:.3e}, oracle gap {worst_oracle:.3e} < 1e-10 "
        f"over 50 instances x 10 angle vectors",
    )


def test_c04_projective_reduction():
    rng = np.random.default_rng(104)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 4))
        p = random_pauli(rng, n)
        a = p.matrix()
        eye = np.eye(a.shape[0])
        pair = informative_kraus(MeasurementSpec(p, PI / 2, "informative"))
        worst = max(
            worst,
            max_abs(pair[1] - (eye + a) / 2),
            max_abs(pair[0] + (eye - a) / 2),
        )
    assert worst < 1e-12
    assert generalized_eigenvalue(PI / 2, 1) == 1.0
    assert generalized_eigenvalue(PI / 2, 0) == -1.0
    report(
        4,
        "projective reduction",
        f"Kraus vs signed eigenprojectors {worst:.3e} < 1e-12, alpha = +-1",
    )


def test_c05_noninformative_flatness():
    rng = np.random.default_rng(105)
    worst_prob = 0.0
    worst_effect = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 3))
        p = random_pauli(rng, n)
        phi = phi_closed_open(rng)
        spec = MeasurementSpec(p, phi, "noninformative")
        pair = noninformative_kraus(spec)
        for out in (0, 1):
            effect = pair[out].conj().T @ pair[out]
            worst_effect = max(worst_effect, max_abs(effect - np.eye(2**n) / 2))
        rho = random_density(rng, n)
        for out in (0, 1):
            _, prob = state_update(rho, spec, out)
            worst_prob = max(worst_prob, abs(prob - 0.5))
    assert worst_effect < 1e-13  # effects are I/2 analytically
    assert worst_prob < 1e-12
    report(
        5,
        "noninformative flatness",
        f"probability deviation {worst_prob:.3e} < 1e-12 over 100 states",
    )


def test_c06_circuit_synthesis_contract():
    rng = np.random.default_rng(106)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        p = random_pauli(rng, n)
        phi = phi_closed_open(rng)
        kind = ("informative", "noninformative")[int(rng.integers(2))]
        gateset = ("cz", "zx90")[int(rng.integers(2))]
        mc = synthesize_measurement_circuit(p, phi, kind, gateset)
        induced = induced_kraus(mc)
        analytic = kraus_pair(MeasurementSpec(p, phi, kind))
        for out in (0, 1):
            worst = max(worst, distance_up_to_phase(induced[out], analytic[out]))
    assert worst < 1e-10
    report(
        6,
        "circuit-synthesis contract",
        f"max per-outcome phase distance {worst:.3e} < 1e-10 over 100 circuits",
    )


def test_c07_otoc_chain_of_equalities():
    rng = np.random.default_rng(107)
    ham = build_mixed_field_ising(3)
    worst = 0.0
    worst_bound = -math.inf
    for _ in range(50):
        rho = random_density(rng, 3)
        pa, pb = random_pauli(rng, 3), random_pauli(rng, 3)
        u = propagator(ham, float(rng.uniform(0.0, 2.0)))
        bt = u.matrix.conj().T @ pb.matrix() @ u.matrix
        # four independent routes to the same number
        protocol_leg = otoc(
            rho, pa, pb, u, part="real", phis=rng.uniform(0.15, PI / 2, size=4)
        ).value
        nested_leg = oracle_nested(
            rho.matrix, [pa.matrix(), bt, pa.matrix(), bt], ["informative"] * 4
        ).real
        f = oracle_otoc(rho.matrix, pa.matrix(), pb.matrix(), u.matrix)
        otoc_leg = (1.0 + f.real) / 2.0
        comm = bt @ pa.matrix() - pa.matrix() @ bt
        square_leg = 1.0 - float(np.real(np.trace(comm.conj().T @ comm @ rho.matrix))) / 4.0
        legs = [protocol_leg, nested_leg, otoc_leg, square_leg]
        worst = max(worst, max(legs) - min(legs))
        worst_bound = max(worst_bound, f.real - 1.0)
    assert worst < 1e-10
    assert worst_bound <= 1e-10
    # F(0) = 1 for disjoint supports
    rho = random_density(rng, 3)
    f0 = oracle_otoc(
        rho.matrix,
        PauliString(("Z", "I", "I")).matrix(),
        PauliString(("I", "I", "X")).matrix(),
        np.eye(8),
    )
    assert abs(f0 - 1.0) < 1e-10
    report(
        7,
        "OTOC chain of equalities",
        f"max leg disagreement {worst:.3e} < 1e-10 over 50 instances; "
        f"Re F - 1 <= {worst_bound:.3e}; F(0) = 1",
    )


def test_c08_statistical_bounds():
    # 2-step sequence: A = ZI then B = ZZ on a product state with
    # <IZ> = 0.825, so the estimator targets C = 0.825 and the projective
    # run keeps a healthy variance margin below the bound.
    start = time.time()
    bloch_z = 0.825
    qubit1 = np.array([[ (1 - bloch_z) / 2, 0.31 * 0.2], [0.31 * 0.2, (1 + bloch_z) / 2]])
    rho = DensityMatrix(2, np.kron(np.diag([1.0, 0.0]), qubit1))
    pa, pb = PauliString(("Z", "I")), PauliString(("Z", "Z"))
    runs, trials = 200, 10_000
    mses = {}
    for phi_index, phi in enumerate((PI / 2, PI / 4, PI / 8)):
        steps = [
            MeasureStep(MeasurementSpec(pa, phi, "informative")),
            MeasureStep(MeasurementSpec(pb, phi, "informative")),
        ]
        exact = nested_estimate(rho, steps).value
        errors = []
        bound = None
        for r in range(runs):
            est = sample_protocol(rho, steps, trials, seed=100_000 * phi_index + r)
            errors.append((est.value - exact) ** 2)
            bound = est.rms_bound
        mse = float(np.mean(errors))
        assert mse <= bound**2 * 1.1, f"phi={phi}: MSE {mse} > 1.1 x bound^2 {bound**2}"
        mses[phi] = mse
    assert mses[PI / 2] < mses[PI / 4] and mses[PI / 2] < mses[PI / 8]
    elapsed = time.time() - start
    assert elapsed < 120
    report(
        8,
        "statistical bounds",
        f"MSE/bound^2 = "
        f"{mses[PI/2] * 10_000:.3f}, {mses[PI/4] * 10_000 / 4:.3f}, "
        f"{mses[PI/8] * 10_000 * math.sin(PI/8)**4:.3f} <= 1.1; "
        f"projective smallest; {elapsed:.1f}s < 120s",
    )


def test_c09_time_reversal_ancilla():
    rng = np.random.default_rng(109)
    worst_sector = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 4))
        h = random_hermitian(rng, 2**n)
        t = float(rng.uniform(0.0, 3.0))
        clk = time_reversed_evolution(h, t)
        worst_sector = max(
            worst_sector,
            max_abs(clk.forward - expm(-1j * t * h)),
            max_abs(clk.backward - expm(1j * t * h)),
        )
    assert worst_sector < 1e-10
    ham = build_mixed_field_ising(3)
    worst_otoc = 0.0
    for _ in range(5):
        rho = random_density(rng, 3)
        pa, pb = random_pauli(rng, 3), random_pauli(rng, 3)
        t = float(rng.uniform(0.0, 2.0))
        phis = rng.uniform(0.15, PI / 2, size=4)
        for part in ("real", "imag"):
            direct = otoc(rho, pa, pb, propagator(ham, t), part=part, phis=phis).value
            clocked = otoc(
                rho, pa, pb, clock=time_reversed_evolution(ham, t), part=part, phis=phis
            ).value
            worst_otoc = max(worst_otoc, abs(direct - clocked))
    assert worst_otoc < 1e-9
    report(
        9,
        "time-reversal ancilla",
        f"sector gap {worst_sector:.3e} < 1e-10 over 20 draws; "
        f"clock vs direct OTOC gap {worst_otoc:.3e} < 1e-9",
    )


def test_c10_weak_limit_consistency():
    rng = np.random.default_rng(110)
    ratios = []
    for _ in range(50):
        n = int(rng.integers(1, 3))
        p = random_pauli(rng, n)
        a = p.matrix()
        rho = random_density(rng, n)
        kind = ("informative", "noninformative")[int(rng.integers(2))]
        out = int(rng.integers(2))
        det = canonical_detector(kind)
        dw = weak_value(1, det, det.readout_basis[out])
        mean_a = float(np.real(np.trace(a @ rho.matrix)))

        def residual(phi):
            updated, prob = state_update(rho, MeasurementSpec(p, phi, kind), out)
            first_order = phi * (
                dw.real * (a @ rho.matrix - rho.matrix @ a) / 2j
                + dw.imag * ((a @ rho.matrix + rho.matrix @ a) / 2 - mean_a * rho.matrix)
            )
            return max_abs(updated / prob - rho.matrix - first_order)

        phi = 1e-3
        ratios.append(residual(phi) / residual(phi / 2))
    assert min(ratios) > 3.5 and max(ratios) < 4.5
    report(
        10,
        "weak-limit consistency",
        f"residual ratios in [{min(ratios):.3f}, {max(ratios):.3f}] "
        f"within [3.5, 4.5] over 50 instances",
    )


def test_c11_scrambling_run():
    start = time.time()
    times = [round(0.25 * k, 6) for k in range(40)]
    cfg = config_from_dict(
        {
            "system_size": 6,
            "observable_a": "+ZIIIII",
            "observable_b": "+IIIIIZ",
            "times": times,
            "protocol": "otoc",
            "initial_state": "maximally-mixed",
            "parts": ["real"],
        }
    )
    rows = run_experiment(cfg)
    elapsed = time.time() - start
    assert elapsed < 300
    assert rows[0].re_value == pytest.approx(1.0, abs=1e-10)
    min_f = min(r.re_value for r in rows)
    assert min_f < 0.9
    report(
        11,
        "scrambling run",
        f"n=6 over 40 times in {elapsed:.1f}s < 300s; F(0) = 1; "
        f"min Re F = {min_f:.3f} < 0.9",
    )
