"""Execute a configured experiment over its time grid and emit results.

One CSV row per time point; a JSON sidecar echoes the fully resolved
configuration so the exact run can be reproduced from the sidecar alone.
Floats are written with 17 significant digits, so identical (config,
seed) pairs produce byte-identical files.

Reported values are the correlator parts themselves: for the OTOC the raw
protocol average v is converted (Re F = 2v - 1, Im F = 2v) and the
statistical columns are scaled accordingly.  Sampled sub-runs derive
their stream key from (seed, time index, part index), so every row/part
pair has an independent, reproducible stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .config import ExperimentConfig
from .dynamics import propagator, time_reversed_evolution
from .protocols import otoc, otoc_value, toc

CSV_HEADER = "t,re_value,im_value,re_stderr,im_stderr,rms_bound,mode,trials,seed"


@dataclass(frozen=True)
class ResultRow:
    t: float
    re_value: float | None
    im_value: float | None
    re_stderr: float | None
    im_stderr: float | None
    rms_bound: float
    mode: str
    trials: int
    seed: int


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{x:.17g}"


def rows_to_csv(rows) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    _fmt(r.t),
                    _fmt(r.re_value),
                    _fmt(r.im_value),
                    _fmt(r.re_stderr),
                    _fmt(r.im_stderr),
                    _fmt(r.rms_bound),
                    r.mode,
                    str(r.trials),
                    str(r.seed),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _row_seed(base: int, time_index: int, part_index: int) -> int:
    return (base * (2**32) + time_index * 2 + part_index) % (2**64)


def run_experiment(cfg: ExperimentConfig) -> list[ResultRow]:
    rho = cfg.initial_density()
    rho.check_positive()
    a = cfg.pauli_a()
    b = cfg.pauli_b()
    ham = cfg.hamiltonian_obj()
    sampled = cfg.mode == "sampled"
    scale = 1.0 if cfg.protocol == "toc" else 2.0

    rows = []
    for time_index, t in enumerate(cfg.times):
        values = {"real": None, "imag": None}
        errors = {"real": None, "imag": None}
        bound = 0.0
        if cfg.protocol == "otoc" and cfg.reversal == "clock-ancilla":
            evolution = {"clock": time_reversed_evolution(ham, t)}
        else:
            evolution = {"evolution": propagator(ham, t)}

        for part_index, part in enumerate(("real", "imag")):
            if part not in cfg.parts:
                continue
            kwargs = dict(
                part=part,
                phis=cfg.phis,
                mode=cfg.mode,
                trials=cfg.trials if sampled else None,
                seed=_row_seed(cfg.seed, time_index, part_index) if sampled else None,
            )
            if cfg.protocol == "toc":
                est = toc(rho, a, b, evolution["evolution"], **kwargs)
                values[part] = est.value
            else:
                est = otoc(rho, a, b, **evolution, **kwargs)
                values[part] = otoc_value(part, est.value)
            errors[part] = scale * est.empirical_stderr if sampled else 0.0
            bound = scale * est.rms_bound if sampled else 0.0

        rows.append(
            ResultRow(
                t=t,
                re_value=values["real"],
                im_value=values["imag"],
                re_stderr=errors["real"],
                im_stderr=errors["imag"],
                rms_bound=bound,
                mode=cfg.mode,
                trials=cfg.trials if sampled else 0,
                seed=cfg.seed,
            )
        )
    return rows


def write_outputs(cfg: ExperimentConfig, rows, out_path) -> tuple[Path, Path]:
    """Write the CSV and the resolved-config sidecar next to it."""
    csv_path = Path(out_path)
    sidecar = csv_path.with_name(csv_path.stem + "_config.json")
    csv_path.write_text(rows_to_csv(rows), encoding="utf-8")
    sidecar.write_text(cfg.to_json(), encoding="utf-8")
    return csv_path, sidecar
