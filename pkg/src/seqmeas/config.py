"""Experiment configuration: JSON schema, validation, resolved echo.

The on-disk format is a flat JSON object; every field name below is a
key.  Unknown keys are rejected so typos surface as validation errors.

Required:
  system_size     int, 1..10 (9 with the clock ancilla)
  observable_a    Pauli-string text, e.g. "+ZIIIII" (sign optional)
  observable_b    same
  times           list of finite floats

Optional (defaults in parentheses):
  protocol        "toc" | "otoc"                     ("otoc")
  initial_state   bit-string label, "maximally-mixed",
                  or an amplitude list of length 2^n; amplitudes are
                  numbers or [re, im] pairs          ("0" * system_size)
  hamiltonian     {"model": "mixed-field-ising", "J":, "g":, "h":}
                  or {"terms": [[coeff, pauli-text], ...]}
                                                     (model with J=1, g=1.05, h=0.5)
  phis            strength angle(s) in (0, pi/2]; a scalar broadcasts to
                  every measurement (2 for toc, 4 for otoc)   (pi/2)
  mode            "exact" | "sampled"                ("exact")
  trials          int >= 1, sampled mode only        (10000)
  seed            int >= 0                           (0)
  parts           nonempty subset of ["real","imag"] (both)
  reversal        "direct-dagger" | "clock-ancilla"  ("direct-dagger")
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import MAX_QUBITS, DensityMatrix, NumericalInvariantError, PureState
from .dynamics import DEFAULT_ISING, Hamiltonian, build_mixed_field_ising
from .observables import PauliString

PROTOCOLS = ("toc", "otoc")
MODES = ("exact", "sampled")
PARTS = ("real", "imag")
REVERSALS = ("direct-dagger", "clock-ancilla")


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the field."""


_KNOWN_FIELDS = {
    "system_size",
    "observable_a",
    "observable_b",
    "times",
    "protocol",
    "initial_state",
    "hamiltonian",
    "phis",
    "mode",
    "trials",
    "seed",
    "parts",
    "reversal",
}


def _fail(field: str, message: str):
    raise ConfigError(f"field '{field}': {message}")


def _require_int(field: str, value, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(field, f"expected an integer, got {value!r}")
    if value < minimum:
        _fail(field, f"must be >= {minimum}, got {value}")
    return value


def _require_enum(field: str, value, allowed) -> str:
    if value not in allowed:
        _fail(field, f"must be one of {list(allowed)}, got {value!r}")
    return value


def _parse_pauli(field: str, text, n: int) -> PauliString:
    if not isinstance(text, str):
        _fail(field, f"expected Pauli-string text, got {text!r}")
    try:
        p = PauliString.from_text(text)
    except ValueError as exc:
        _fail(field, str(exc))
    if p.n_qubits != n:
        _fail(field, f"acts on {p.n_qubits} qubits, system_size is {n}")
    return p


@dataclass(frozen=True)
class ExperimentConfig:
    system_size: int
    observable_a: str
    observable_b: str
    times: tuple[float, ...]
    protocol: str
    initial_state: object
    hamiltonian: dict
    phis: tuple[float, ...]
    mode: str
    trials: int
    seed: int
    parts: tuple[str, ...]
    reversal: str

    @property
    def n_measurements(self) -> int:
        return 2 if self.protocol == "toc" else 4

    def pauli_a(self) -> PauliString:
        return PauliString.from_text(self.observable_a)

    def pauli_b(self) -> PauliString:
        return PauliString.from_text(self.observable_b)

    def initial_density(self) -> DensityMatrix:
        n = self.system_size
        state = self.initial_state
        if state == "maximally-mixed":
            return DensityMatrix.maximally_mixed(n)
        if isinstance(state, str):
            return DensityMatrix.from_label(state)
        amps = np.array([_amplitude(x) for x in state], dtype=np.complex128)
        return PureState(n, amps).density()

    def hamiltonian_obj(self) -> Hamiltonian:
        spec = self.hamiltonian
        if "terms" in spec:
            return Hamiltonian.from_pairs(self.system_size, spec["terms"])
        return build_mixed_field_ising(
            self.system_size, spec["J"], spec["g"], spec["h"]
        )

    def to_dict(self) -> dict:
        return {
            "system_size": self.system_size,
            "observable_a": self.observable_a,
            "observable_b": self.observable_b,
            "times": list(self.times),
            "protocol": self.protocol,
            "initial_state": self.initial_state,
            "hamiltonian": self.hamiltonian,
            "phis": list(self.phis),
            "mode": self.mode,
            "trials": self.trials,
            "seed": self.seed,
            "parts": list(self.parts),
            "reversal": self.reversal,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _amplitude(x) -> complex:
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    raise ConfigError(
        f"field 'initial_state': amplitude must be a number or [re, im], got {x!r}"
    )


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Validate a raw mapping and resolve all defaults."""
    if not isinstance(raw, dict):
        raise ConfigError(f"configuration must be a JSON object, got {type(raw).__name__}")
    unknown = sorted(set(raw) - _KNOWN_FIELDS)
    if unknown:
        raise ConfigError(f"unknown field(s): {', '.join(unknown)}")
    for field in ("system_size", "observable_a", "observable_b", "times"):
        if field not in raw:
            _fail(field, "is required")

    protocol = _require_enum("protocol", raw.get("protocol", "otoc"), PROTOCOLS)
    reversal = _require_enum("reversal", raw.get("reversal", "direct-dagger"), REVERSALS)
    n = _require_int("system_size", raw["system_size"], 1)
    budget = MAX_QUBITS - (1 if protocol == "otoc" and reversal == "clock-ancilla" else 0)
    if n > budget:
        _fail("system_size", f"must be <= {budget} for this protocol/reversal")

    _parse_pauli("observable_a", raw["observable_a"], n)
    _parse_pauli("observable_b", raw["observable_b"], n)

    times_raw = raw["times"]
    if not isinstance(times_raw, (list, tuple)) or not times_raw:
        _fail("times", "must be a nonempty list of numbers")
    times = []
    for t in times_raw:
        if isinstance(t, bool) or not isinstance(t, (int, float)) or not math.isfinite(t):
            _fail("times", f"entry {t!r} is not a finite number")
        times.append(float(t))

    n_meas = 2 if protocol == "toc" else 4
    phis_raw = raw.get("phis", math.pi / 2)
    if isinstance(phis_raw, (int, float)) and not isinstance(phis_raw, bool):
        phis_list = [float(phis_raw)] * n_meas
    elif isinstance(phis_raw, (list, tuple)):
        phis_list = []
        for p in phis_raw:
            if isinstance(p, bool) or not isinstance(p, (int, float)):
                _fail("phis", f"entry {p!r} is not a number")
            phis_list.append(float(p))
        if len(phis_list) != n_meas:
            _fail("phis", f"{protocol} takes {n_meas} angles, got {len(phis_list)}")
    else:
        _fail("phis", f"expected a number or list, got {phis_raw!r}")
    for p in phis_list:
        if not 0.0 < p <= math.pi / 2:
            _fail("phis", f"angle {p} outside (0, pi/2]")

    mode = _require_enum("mode", raw.get("mode", "exact"), MODES)
    trials = _require_int("trials", raw.get("trials", 10000), 1)
    seed = _require_int("seed", raw.get("seed", 0), 0)

    parts_raw = raw.get("parts", list(PARTS))
    if not isinstance(parts_raw, (list, tuple)) or not parts_raw:
        _fail("parts", "must be a nonempty list")
    parts = []
    for part in parts_raw:
        _require_enum("parts", part, PARTS)
        if part not in parts:
            parts.append(part)

    initial_state = raw.get("initial_state", "0" * n)
    if isinstance(initial_state, str):
        if initial_state != "maximally-mixed":
            if len(initial_state) != n or any(c not in "01" for c in initial_state):
                _fail(
                    "initial_state",
                    f"label must be {n} bits or 'maximally-mixed', got {initial_state!r}",
                )
    elif isinstance(initial_state, (list, tuple)):
        if len(initial_state) != 2**n:
            _fail("initial_state", f"amplitude list must have length {2**n}")
        cleaned = []
        for x in initial_state:
            if isinstance(x, (int, float)) and not isinstance(x, bool):
                cleaned.append(x)
            elif isinstance(x, (list, tuple)) and len(x) == 2:
                cleaned.append([float(x[0]), float(x[1])])
            else:
                _fail("initial_state", f"bad amplitude {x!r}")
        initial_state = cleaned
    else:
        _fail("initial_state", f"unsupported value {initial_state!r}")

    hamiltonian = raw.get("hamiltonian", {"model": "mixed-field-ising", **DEFAULT_ISING})
    if not isinstance(hamiltonian, dict):
        _fail("hamiltonian", "must be an object")
    if "terms" in hamiltonian:
        extra = set(hamiltonian) - {"terms"}
        if extra:
            _fail("hamiltonian", f"unexpected keys next to 'terms': {sorted(extra)}")
        terms = hamiltonian["terms"]
        if not isinstance(terms, (list, tuple)) or not terms:
            _fail("hamiltonian", "'terms' must be a nonempty list")
        resolved_terms = []
        for item in terms:
            if not isinstance(item, (list, tuple)) or len(item) != 2:
                _fail("hamiltonian", f"term {item!r} is not a [coeff, pauli] pair")
            coeff, text = item
            if isinstance(coeff, bool) or not isinstance(coeff, (int, float)):
                _fail("hamiltonian", f"coefficient {coeff!r} is not a number")
            _parse_pauli("hamiltonian", text, n)
            resolved_terms.append([float(coeff), str(text)])
        hamiltonian = {"terms": resolved_terms}
    else:
        model = hamiltonian.get("model")
        if model != "mixed-field-ising":
            _fail("hamiltonian", f"unknown model {model!r} (or provide 'terms')")
        extra = set(hamiltonian) - {"model", "J", "g", "h"}
        if extra:
            _fail("hamiltonian", f"unknown keys: {sorted(extra)}")
        resolved = {"model": "mixed-field-ising"}
        for key in ("J", "g", "h"):
            value = hamiltonian.get(key, DEFAULT_ISING[key])
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                _fail("hamiltonian", f"parameter {key} must be a number, got {value!r}")
            resolved[key] = float(value)
        hamiltonian = resolved
        if n < 2:
            _fail("system_size", "mixed-field-ising needs at least 2 sites")

    cfg = ExperimentConfig(
        system_size=n,
        observable_a=raw["observable_a"],
        observable_b=raw["observable_b"],
        times=tuple(times),
        protocol=protocol,
        initial_state=initial_state,
        hamiltonian=hamiltonian,
        phis=tuple(phis_list),
        mode=mode,
        trials=trials,
        seed=seed,
        parts=tuple(parts),
        reversal=reversal,
    )
    try:
        cfg.initial_density()
    except NumericalInvariantError as exc:
        _fail("initial_state", str(exc))
    return cfg


def load_config(path: str, overrides: dict | None = None) -> ExperimentConfig:
    """Load and validate a JSON config file; ``overrides`` wins over file
    values (used by the CLI flags)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if overrides:
        if not isinstance(raw, dict):
            raise ConfigError("configuration must be a JSON object")
        raw = {**raw, **{k: v for k, v in overrides.items() if v is not None}}
    return config_from_dict(raw)
