"""Sequential-measurement engine: exact enumeration and trajectory sampling.

Exact mode walks the full outcome tree, applying analytic Kraus operators
and interleaved unitaries, and contracts the generalized-eigenvalue
weights against the exact sequence distribution.  It is the verification
reference: its value is independent of every strength angle.

Sampled mode models the experiment: each trial draws one full outcome
string from the sequential Born rule.  Randomness is counter-based
(Philox keyed by the seed; trial k consumes row k of the uniform block),
so results do not depend on execution order or batching, and aggregation
uses exactly-rounded summation (math.fsum) for bit-stable results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import fsum

import numpy as np

from .core import (
    CHECK_TOL,
    DensityMatrix,
    NumericalInvariantError,
    embed,
    is_unitary,
    tensor,
)
from .dynamics import ClockPropagator, Propagator
from .measurement import (
    INFORMATIVE,
    NONINFORMATIVE,
    MeasurementSpec,
    generalized_eigenvalue,
    kraus_pair,
)
from .observables import PAULI_X

MAX_ENUMERATED_MEASUREMENTS = 16

# Memory cap for the sampled-mode state batch, in complex128 entries.
_BATCH_ENTRIES = 4_000_000


@dataclass(frozen=True)
class MeasureStep:
    """Measure ``spec`` on ``targets`` (default: the whole register)."""

    spec: MeasurementSpec
    targets: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.targets is not None:
            object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))


@dataclass(frozen=True)
class EvolveStep:
    """Apply a register-wide unitary (e.g. U_t or its inverse)."""

    unitary: np.ndarray
    label: str = "evolve"

    def __post_init__(self):
        u = np.array(self.unitary, dtype=np.complex128)
        if not is_unitary(u, CHECK_TOL):
            raise ValueError(f"evolution step {self.label!r} is not unitary to 1e-10")
        u.flags.writeable = False
        object.__setattr__(self, "unitary", u)


SequenceStep = MeasureStep | EvolveStep


@dataclass(frozen=True)
class OutcomeRecord:
    """One outcome string with its alpha-product weight and probability."""

    outcomes: tuple[int, ...]
    weight: float
    probability: float


@dataclass(frozen=True)
class CorrelatorEstimate:
    """Protocol average with statistical metadata.

    ``value`` is the weighted average itself (always real).  For sampled
    runs ``trials`` holds the per-stage trial counts (every stage sees the
    same full-sequence repetitions) and ``rms_bound`` the statistical
    upper bound 1/sqrt(N prod sin^2 phi_k) with N the number of
    full-sequence repetitions; exact runs report zeros.
    """

    value: float
    mode: str
    trials: tuple[int, ...]
    phis: tuple[float, ...]
    rms_bound: float
    empirical_stderr: float = 0.0


def rms_bound(phis, trials) -> float:
    """Statistical upper bound 1/sqrt(prod n_k * prod sin^2 phi_k).

    ``trials`` carries one count per sequence stage; the product is the
    total data volume of the estimator.
    """
    phis = [float(p) for p in phis]
    counts = [int(n) for n in trials]
    if not phis or not counts:
        raise ValueError("phis and trials must be nonempty")
    if len(phis) != len(counts):
        raise ValueError("phis and trials must have equal length")
    if any(n < 1 for n in counts):
        raise ValueError("trial counts must be >= 1")
    for p in phis:
        if not 0.0 < p <= math.pi / 2:
            raise ValueError(f"phi must lie in (0, pi/2], got {p}")
    denom = math.prod(counts) * math.prod(math.sin(p) ** 2 for p in phis)
    return 1.0 / math.sqrt(denom)


def _resolve_steps(initial: DensityMatrix, steps):
    """Embed every measurement on the register and validate dimensions."""
    n = initial.n_qubits
    dim = initial.dim
    resolved = []
    phis = []
    for step in steps:
        if isinstance(step, MeasureStep):
            pair = kraus_pair(step.spec)
            targets = step.targets
            if targets is None:
                targets = tuple(range(n))
            if len(targets) != step.spec.n_qubits:
                raise ValueError(
                    f"measurement of a {step.spec.n_qubits}-qubit observable "
                    f"got {len(targets)} target(s)"
                )
            ks = tuple(embed(pair[a], n, targets) for a in (0, 1))
            alphas = tuple(generalized_eigenvalue(step.spec.phi, a) for a in (0, 1))
            resolved.append(("measure", ks, alphas))
            phis.append(step.spec.phi)
        elif isinstance(step, EvolveStep):
            if step.unitary.shape != (dim, dim):
                raise ValueError(
                    f"evolution step {step.label!r} has shape "
                    f"{step.unitary.shape}, expected {(dim, dim)}"
                )
            resolved.append(("evolve", step.unitary, None))
        else:
            raise TypeError(f"unknown sequence step {step!r}")
    return resolved, tuple(phis)


def sequence_distribution(initial: DensityMatrix, steps) -> list[OutcomeRecord]:
    """Enumerate all outcome strings with exact probabilities and weights.

    Probabilities follow the sequential Born rule
    P(a_1..a_m) = Tr(K_m ... K_1 rho K_1^dag ... K_m^dag) with unitary
    steps interleaved; they are checked to sum to 1 within 1e-10.
    """
    resolved, phis = _resolve_steps(initial, steps)
    m = len(phis)
    if m > MAX_ENUMERATED_MEASUREMENTS:
        raise ValueError(
            f"{m} measurement steps exceed the enumeration limit of "
            f"{MAX_ENUMERATED_MEASUREMENTS}"
        )
    records: list[OutcomeRecord] = []

    def walk(i, state, outcomes, weight):
        if i == len(resolved):
            prob = float(np.real(np.trace(state)))
            if prob < -1e-12 or prob > 1 + 1e-12:
                raise NumericalInvariantError(
                    f"branch probability {prob} outside [0, 1]"
                )
            records.append(OutcomeRecord(outcomes, weight, prob))
            return
        kind, payload, alphas = resolved[i]
        if kind == "evolve":
            walk(i + 1, payload @ state @ payload.conj().T, outcomes, weight)
        else:
            for a in (0, 1):
                k = payload[a]
                walk(i + 1, k @ state @ k.conj().T, outcomes + (a,), weight * alphas[a])

    walk(0, initial.matrix, (), 1.0)
    total = fsum(r.probability for r in records)
    if abs(total - 1.0) > 1e-10:
        raise NumericalInvariantError(
            f"sequence probabilities sum to {total!r}, not 1"
        )
    return records


def nested_estimate(
    initial: DensityMatrix,
    steps,
    mode: str = "exact",
    trials: int | None = None,
    seed: int | None = None,
) -> CorrelatorEstimate:
    """Weighted average of alpha products over the sequence distribution.

    For all-informative sequences this equals the expectation of the
    nested anticommutator of the measured observables normalized by
    2^(m-1); a noninformative first measurement turns the outermost
    bracket into a commutator with normalization 2^(m-2) (2i).  The value
    does not depend on the strength angles.
    """
    if mode == "exact":
        records = sequence_distribution(initial, steps)
        m = len(records[0].outcomes)
        if m == 0:
            raise ValueError("sequence contains no measurements")
        value = fsum(r.weight * r.probability for r in records)
        phis = tuple(s.spec.phi for s in steps if isinstance(s, MeasureStep))
        return CorrelatorEstimate(
            value=value,
            mode="exact",
            trials=(0,) * m,
            phis=phis,
            rms_bound=0.0,
            empirical_stderr=0.0,
        )
    if mode == "sampled":
        if trials is None or seed is None:
            raise ValueError("sampled mode needs trials and seed")
        return sample_protocol(initial, steps, trials, seed)
    raise ValueError(f"unknown mode {mode!r}")


def trial_uniforms(seed: int, trials: int, draws: int) -> np.ndarray:
    """Uniform deviates for ``trials`` independent trials.

    Counter-based (Philox keyed by ``seed``): row k is a pure function of
    (seed, k), so per-trial streams are independent of execution order
    and batching.
    """
    gen = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    return gen.random((trials, draws))


def sample_protocol(
    initial: DensityMatrix, steps, trials: int, seed: int
) -> CorrelatorEstimate:
    """Monte Carlo estimate: average alpha products over sampled strings.

    Each trial samples one full outcome string from the sequential Born
    rule.  Deterministic for a fixed seed; the reported
    ``empirical_stderr`` is the sample standard error of the mean.
    """
    trials = int(trials)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    resolved, phis = _resolve_steps(initial, steps)
    m = len(phis)
    if m == 0:
        raise ValueError("sequence contains no measurements")

    dim = initial.dim
    uniforms = trial_uniforms(seed, trials, m)
    weights = np.empty(trials, dtype=np.float64)
    effect1 = [
        payload[1].conj().T @ payload[1] if kind == "measure" else None
        for kind, payload, _ in resolved
    ]

    batch = max(1, min(trials, _BATCH_ENTRIES // (dim * dim)))
    for start in range(0, trials, batch):
        stop = min(start + batch, trials)
        states = np.broadcast_to(initial.matrix, (stop - start, dim, dim)).copy()
        w = np.ones(stop - start, dtype=np.float64)
        meas_index = 0
        for i, (kind, payload, alphas) in enumerate(resolved):
            if kind == "evolve":
                states = payload @ states @ payload.conj().T
                continue
            p1 = np.real(np.einsum("bij,ji->b", states, effect1[i]))
            drawn1 = uniforms[start:stop, meas_index] < p1
            for a, mask in ((0, ~drawn1), (1, drawn1)):
                if not np.any(mask):
                    continue
                k = payload[a]
                prob = p1[mask] if a == 1 else 1.0 - p1[mask]
                prob = np.maximum(prob, 1e-300)
                states[mask] = (k @ states[mask] @ k.conj().T) / prob[:, None, None]
                w[mask] *= alphas[a]
            meas_index += 1
        weights[start:stop] = w

    mean = fsum(weights) / trials
    if trials > 1:
        var = fsum((x - mean) ** 2 for x in weights) / (trials - 1)
        stderr = math.sqrt(var / trials)
    else:
        stderr = 0.0
    bound = 1.0 / math.sqrt(trials * math.prod(math.sin(p) ** 2 for p in phis))
    return CorrelatorEstimate(
        value=mean,
        mode="sampled",
        trials=(trials,) * m,
        phis=phis,
        rms_bound=bound,
        empirical_stderr=stderr,
    )


# ---------------------------------------------------------------------------
# Two-point and four-point correlator protocols.


def _evolution_matrix(evolution) -> np.ndarray:
    if isinstance(evolution, Propagator):
        return evolution.matrix
    return np.asarray(evolution, dtype=np.complex128)


def _first_kind(part: str) -> str:
    if part == "real":
        return INFORMATIVE
    if part == "imag":
        return NONINFORMATIVE
    raise ValueError(f"part must be 'real' or 'imag', got {part!r}")


def _check_phis(phis, count: int) -> tuple[float, ...]:
    phis = tuple(float(p) for p in phis)
    if len(phis) != count:
        raise ValueError(f"this protocol takes {count} strength angles, got {len(phis)}")
    return phis


def toc(
    initial: DensityMatrix,
    a,
    b,
    evolution,
    part: str = "real",
    phis=(math.pi / 2, math.pi / 2),
    mode: str = "exact",
    trials: int | None = None,
    seed: int | None = None,
) -> CorrelatorEstimate:
    """Two-point correlator protocol: measure A, evolve, measure B.

    The weighted average equals Re <B(t) A> when the first measurement is
    informative (part='real') and Im <B(t) A> when it is noninformative
    (part='imag'), for every strength choice.  The trailing inverse
    evolution is omitted: it cannot change the statistics.
    """
    phis = _check_phis(phis, 2)
    u = _evolution_matrix(evolution)
    steps = [
        MeasureStep(MeasurementSpec(a, phis[0], _first_kind(part))),
        EvolveStep(u, "U_t"),
        MeasureStep(MeasurementSpec(b, phis[1], INFORMATIVE)),
    ]
    return nested_estimate(initial, steps, mode, trials, seed)


def otoc(
    initial: DensityMatrix,
    a,
    b,
    evolution=None,
    *,
    clock: ClockPropagator | None = None,
    part: str = "real",
    phis=(math.pi / 2,) * 4,
    mode: str = "exact",
    trials: int | None = None,
    seed: int | None = None,
) -> CorrelatorEstimate:
    """Out-of-time-ordered correlator protocol.

    Runs measure A, evolve, measure B, evolve backward, measure A, evolve,
    measure B, and returns the weighted average v.  With part='real',
    Re F(t) = 2 v - 1; with part='imag', Im F(t) = 2 v (see
    :func:`otoc_value`), where F(t) = <B(t) A B(t) A>.

    The single backward evolution is realized either directly
    (``evolution`` given: conjugate-transpose propagator) or with a
    time-reversal ancilla (``clock`` given: the register is extended by
    one qubit whose computational state selects the time direction).
    """
    if (evolution is None) == (clock is None):
        raise ValueError("provide exactly one of evolution or clock")
    phis = _check_phis(phis, 4)
    kind_first = _first_kind(part)

    if clock is None:
        u = _evolution_matrix(evolution)
        reg = initial
        targets = None
        forward = EvolveStep(u, "U_t")
        backward = EvolveStep(u.conj().T, "U_t_dagger")
    else:
        n = initial.n_qubits
        if clock.n_system != n:
            raise ValueError(
                f"clock propagator is for {clock.n_system} system qubits, "
                f"state has {n}"
            )
        reg = DensityMatrix(
            n + 1, tensor(initial.matrix, np.diag([0.0, 1.0]))
        )
        targets = tuple(range(n))
        flip = embed(PAULI_X, n + 1, (n,))
        forward = EvolveStep(clock.matrix, "U_clock")
        backward = EvolveStep(flip @ clock.matrix @ flip, "U_clock_reversed")

    steps = [
        MeasureStep(MeasurementSpec(a, phis[0], kind_first), targets),
        forward,
        MeasureStep(MeasurementSpec(b, phis[1], INFORMATIVE), targets),
        backward,
        MeasureStep(MeasurementSpec(a, phis[2], INFORMATIVE), targets),
        forward,
        MeasureStep(MeasurementSpec(b, phis[3], INFORMATIVE), targets),
    ]
    return nested_estimate(reg, steps, mode, trials, seed)


def otoc_value(part: str, average: float) -> float:
    """Convert the OTOC protocol average to the correlator part:
    Re F = 2 v - 1, Im F = 2 v."""
    if part == "real":
        return 2.0 * average - 1.0
    if part == "imag":
        return 2.0 * average
    raise ValueError(f"part must be 'real' or 'imag', got {part!r}")
