"""Batch harness: run the analytic and numeric engines side by side, sweep
parameters, and serialize machine-readable reports.

Reports are a pure function of (spec, seed): serialized CSV/JSON output is
byte-identical across runs with the same inputs.  Wall-clock duration is kept
on the in-memory report only and never serialized.
"""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import fock
from .coherent import ModeParams, single_branch
from .protocol import (
    DeviceParams,
    collapse,
    concurrence_eq11,
    concurrence_general,
    default_device_params,
    kappa_zero,
    state_after_second_pulse,
)

CONFIG_ENV_VAR = "LCECS_CONFIG"
SWEEP_AXES = ("kappa0", "phi", "alpha_im", "delta_pulse")
SWEEP_COLUMNS = (
    "axis",
    "p_Q0",
    "p_Q1",
    "C_analytic",
    "C_numeric",
    "fidelity",
    "t_p",
    "kappa0_abs",
    "phi",
    "warnings",
)
REGIME_RATIO_FLOOR = 10.0
STANDARD_POINT_TOL = 1e-12


@dataclass(frozen=True)
class ProtocolSpec:
    """One protocol run: device, free evolution time, engine mode, how the
    measurement outcome is treated, and the Fock truncation."""

    params: DeviceParams = field(default_factory=default_device_params)
    free_time: float | None = None  # None -> pi / omega_1
    mode: str = "idealized"  # "idealized" or "full"
    outcome_policy: str = "both"  # "both" or "sampled"
    seed: int = 0
    trunc: fock.TruncationConfig | None = None  # None -> auto
    tail_tol: float = fock.DEFAULT_TAIL_TOL  # used when trunc is auto

    def __post_init__(self) -> None:
        if self.free_time is not None and self.free_time < 0.0:
            raise ValueError(f"free_time must be >= 0, got {self.free_time}")
        if self.mode not in ("idealized", "full"):
            raise ValueError(f"mode must be 'idealized' or 'full', got {self.mode!r}")
        if self.outcome_policy not in ("both", "sampled"):
            raise ValueError(
                f"outcome_policy must be 'both' or 'sampled', got {self.outcome_policy!r}"
            )

    @property
    def effective_free_time(self) -> float:
        return math.pi / self.params.mode1.omega if self.free_time is None else self.free_time

    def effective_trunc(self) -> fock.TruncationConfig:
        return self.trunc or fock.TruncationConfig.auto(self.params, self.tail_tol)


@dataclass
class OutcomeResult:
    """Per-measurement-outcome numbers from one engine pair."""

    probability_analytic: float
    probability_numeric: float
    concurrence_analytic: float
    concurrence_numeric: float
    concurrence_closed_form: float | None


@dataclass
class ProtocolReport:
    """Everything one protocol run produced, ready for serialization."""

    spec: ProtocolSpec
    t_pulse: float
    free_time: float
    kappa0_abs: float
    phi: float
    outcomes: dict[int, OutcomeResult]
    engine_fidelity: float
    sampled_outcome: int | None
    warnings: list[str]
    duration_s: float  # in-memory only; excluded from serialized output

    def reported_outcome(self) -> int:
        """Outcome whose concurrence goes into flat CSV columns: the sampled
        one if the policy sampled, else the plus branch (qubit 1)."""
        return self.sampled_outcome if self.sampled_outcome is not None else 1


def _numeric_final_state(spec: ProtocolSpec, trunc: fock.TruncationConfig) -> fock.FockState:
    """Numeric pre-measurement state for either engine mode."""
    p = spec.params
    t = spec.effective_free_time
    psi = fock.embed(single_branch(1.0, 0, p.alpha1, p.alpha2), trunc)
    if spec.mode == "full":
        return fock.run_schedule(psi, p, fock.standard_schedule(p, t))
    # idealized pulse: instantaneous qubit rotation + free mode rotation
    rotate_only = fock.PulseSegment(p.t_pulse, 0.0, 0.0, 0.0)
    free = fock.PulseSegment(t, p.delta0, p.epsilon, 1.0)
    h_rotate = fock.build_hamiltonian(p, rotate_only, trunc)
    h_free = fock.build_hamiltonian(p, free, trunc)
    psi = fock.propagate(fock.qubit_x90(psi), h_rotate, p.t_pulse)
    psi = fock.propagate(psi, h_free, t)
    psi = fock.propagate(fock.qubit_x90(psi), h_rotate, p.t_pulse)
    return psi


def _at_standard_point(p: DeviceParams, t: float) -> bool:
    """Symmetric device, equal initial amplitudes, free time pi/omega: the
    regime where the closed-form concurrences apply."""
    return (
        p.is_symmetric
        and p.alpha1 == p.alpha2
        and abs(t - math.pi / p.mode1.omega) <= STANDARD_POINT_TOL
    )


def run_protocol(spec: ProtocolSpec) -> ProtocolReport:
    """Execute prepare -> pulse -> free(t) -> pulse -> measure in both engines."""
    started = time.perf_counter()
    p = spec.params
    t = spec.effective_free_time
    trunc = spec.effective_trunc()
    warnings: list[str] = []
    if spec.mode == "full" and p.pulse_regime_ratio() <= REGIME_RATIO_FLOOR:
        warnings.append(
            f"pulse regime check: delta_pulse/max(epsilon, lambda) = "
            f"{p.pulse_regime_ratio():.3g} <= {REGIME_RATIO_FLOOR:g}"
        )

    final = state_after_second_pulse(p, t)
    psi = _numeric_final_state(spec, trunc)
    target = fock.embed(final, trunc)
    engine_fidelity = fock.fidelity_mod_phase(psi.normalized(), target.normalized())

    closed_sign = {0: -1, 1: 1}  # outcome 1 collapses onto the plus pair
    standard = _at_standard_point(p, t)
    k0_abs = abs(kappa_zero(p))
    phi = p.epsilon * t
    im_alpha_prime = (p.alpha1 * np.exp(-1j * p.mode1.omega * p.t_pulse)).imag

    outcomes: dict[int, OutcomeResult] = {}
    for q in (0, 1):
        try:
            prob_a, pair = collapse(final, q)
            conc_a = concurrence_general(pair)
        except ValueError as err:
            prob_a, conc_a = 0.0, 0.0
            warnings.append(f"analytic outcome {q}: {err}")
        try:
            prob_n, two_mode = fock.measure_qubit(psi, q)
            conc_n = fock.i_concurrence(two_mode)
        except ValueError as err:
            prob_n, conc_n = 0.0, 0.0
            warnings.append(f"numeric outcome {q}: {err}")
        closed = None
        if standard:
            try:
                closed = concurrence_eq11(k0_abs, phi, im_alpha_prime, closed_sign[q])
            except ValueError:
                pass  # degenerate outcome: no conditional state to score
        outcomes[q] = OutcomeResult(prob_a, prob_n, conc_a, conc_n, closed)

    sampled = fock.sample_measurement(psi, spec.seed) if spec.outcome_policy == "sampled" else None
    return ProtocolReport(
        spec=spec,
        t_pulse=p.t_pulse,
        free_time=t,
        kappa0_abs=k0_abs,
        phi=phi,
        outcomes=outcomes,
        engine_fidelity=engine_fidelity,
        sampled_outcome=sampled,
        warnings=warnings,
        duration_s=time.perf_counter() - started,
    )


def timing_report(p: DeviceParams) -> dict[str, float]:
    """Pulse and free-evolution durations in ns: t_p = pi/(2 delta_pulse),
    t_free = pi/omega_1."""
    return {"t_p": math.pi / (2.0 * p.delta_pulse), "t_free": math.pi / p.mode1.omega}


def _spec_on_axis(spec: ProtocolSpec, axis: str, value: float) -> ProtocolSpec:
    p = spec.params
    if axis == "kappa0":
        params = replace(
            p,
            mode1=ModeParams(p.mode1.omega, value * p.mode1.omega),
            mode2=ModeParams(p.mode2.omega, value * p.mode2.omega),
        )
    elif axis == "phi":
        params = replace(p, epsilon=value / spec.effective_free_time)
    elif axis == "alpha_im":
        params = replace(
            p,
            alpha1=complex(p.alpha1.real, value),
            alpha2=complex(p.alpha2.real, value),
        )
    elif axis == "delta_pulse":
        params = replace(p, delta_pulse=value)
    else:
        raise ValueError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
    return replace(spec, params=params, trunc=None)


@dataclass
class SweepRow:
    axis_value: float
    report: ProtocolReport | None
    error: str | None = None


def sweep(spec: ProtocolSpec, axis: str, grid: list[float]) -> list[SweepRow]:
    """One protocol run per grid point, in grid order.  A point that fails
    hard becomes a row with an error message; the sweep continues."""
    if not grid:
        raise ValueError("sweep grid must be nonempty")
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
    rows: list[SweepRow] = []
    for value in grid:
        try:
            rows.append(SweepRow(value, run_protocol(_spec_on_axis(spec, axis, value))))
        except Exception as err:  # record and keep sweeping
            rows.append(SweepRow(value, None, error=str(err)))
    return rows


# ---------------------------------------------------------------------------
# serialization: 17 significant digits, deterministic key order
# ---------------------------------------------------------------------------


def format_number(x: float) -> str:
    if isinstance(x, bool):  # bool is an int subclass; keep JSON booleans
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _json_scalar(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, float) and (math.isnan(value) or math.isinf(value)):
        return "null"  # strict JSON has no NaN/Inf
    if isinstance(value, (int, float)):
        return format_number(value)
    raise TypeError(f"cannot serialize {type(value)}")


def to_json(value, indent: int = 0) -> str:
    """Minimal deterministic JSON writer: sorted keys, floats at 17
    significant digits, complex values rendered as [re, im] pairs."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, complex):
        value = [value.real, value.imag]
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = (
            f'{inner}"{key}": {to_json(value[key], indent + 1)}' for key in sorted(value)
        )
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = (f"{inner}{to_json(v, indent + 1)}" for v in value)
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _json_scalar(value)


def _device_dict(p: DeviceParams) -> dict:
    return {
        "omega1": p.mode1.omega,
        "lambda1": p.mode1.lambda_,
        "omega2": p.mode2.omega,
        "lambda2": p.mode2.lambda_,
        "epsilon": p.epsilon,
        "delta_pulse": p.delta_pulse,
        "delta0": p.delta0,
        "alpha1": p.alpha1,
        "alpha2": p.alpha2,
    }


def report_to_dict(report: ProtocolReport) -> dict:
    """JSON-ready view of a report (wall-clock duration deliberately absent)."""
    spec = report.spec
    trunc = spec.effective_trunc()
    return {
        "schema": "lcecs.run/1",
        "device": _device_dict(spec.params),
        "protocol": {
            "free_time": report.free_time,
            "mode": spec.mode,
            "outcome_policy": spec.outcome_policy,
            "seed": spec.seed,
            "trunc": {"n1": trunc.n1, "n2": trunc.n2, "tail_tol": trunc.tail_tol},
        },
        "t_p": report.t_pulse,
        "kappa0_abs": report.kappa0_abs,
        "phi": report.phi,
        "outcomes": {
            str(q): {
                "p_analytic": res.probability_analytic,
                "p_numeric": res.probability_numeric,
                "C_analytic": res.concurrence_analytic,
                "C_numeric": res.concurrence_numeric,
                "C_closed_form": res.concurrence_closed_form,
            }
            for q, res in report.outcomes.items()
        },
        "engine_fidelity": report.engine_fidelity,
        "sampled_outcome": report.sampled_outcome,
        "warnings": list(report.warnings),
    }


def report_to_json(report: ProtocolReport) -> str:
    return to_json(report_to_dict(report)) + "\n"


def sweep_to_csv(rows: list[SweepRow]) -> str:
    """Fixed-column CSV for a sweep.  C_analytic/C_numeric report the row's
    reported outcome (sampled if the policy sampled, else the plus branch)."""
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        if row.report is None:
            nan = format_number(math.nan)
            cells = [format_number(row.axis_value)] + [nan] * 8 + [_csv_cell(f"error: {row.error}")]
        else:
            rep = row.report
            q = rep.reported_outcome()
            res = rep.outcomes[q]
            cells = [
                format_number(row.axis_value),
                format_number(rep.outcomes[0].probability_numeric),
                format_number(rep.outcomes[1].probability_numeric),
                format_number(res.concurrence_analytic),
                format_number(res.concurrence_numeric),
                format_number(rep.engine_fidelity),
                format_number(rep.t_pulse),
                format_number(rep.kappa0_abs),
                format_number(rep.phi),
                _csv_cell("; ".join(rep.warnings)),
            ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _csv_cell(text: str) -> str:
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


# ---------------------------------------------------------------------------
# config file handling
# ---------------------------------------------------------------------------


def default_config() -> dict:
    return {
        "device": _device_dict(default_device_params()),
        "protocol": {
            "free_time": None,
            "mode": "idealized",
            "outcome_policy": "both",
            "seed": 0,
            "trunc": "auto",
            "tail_tol": fock.DEFAULT_TAIL_TOL,
        },
        "sweep": {"axis": "kappa0", "grid": [0.25, 0.5, 1.0]},
    }


def _as_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(re, im)
    return complex(value)


def load_config(path: str | None) -> dict:
    """Merge a JSON config file over the built-in defaults.  When ``path`` is
    None the LCECS_CONFIG environment variable is consulted; if that is unset
    the defaults are returned."""
    cfg = default_config()
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR) or None
    if path is None:
        return cfg
    with open(path, encoding="utf-8") as handle:
        user = json.load(handle)
    for section, values in user.items():
        if section not in cfg or not isinstance(values, dict):
            cfg[section] = values
            continue
        cfg[section].update(values)
    return cfg


def spec_from_config(cfg: dict, *, mode: str | None = None, seed: int | None = None) -> ProtocolSpec:
    dev = cfg["device"]
    proto = cfg["protocol"]
    params = DeviceParams(
        mode1=ModeParams(float(dev["omega1"]), float(dev["lambda1"])),
        mode2=ModeParams(float(dev["omega2"]), float(dev["lambda2"])),
        epsilon=float(dev["epsilon"]),
        delta_pulse=float(dev["delta_pulse"]),
        delta0=float(dev.get("delta0", 0.0)),
        alpha1=_as_complex(dev.get("alpha1", 0.0)),
        alpha2=_as_complex(dev.get("alpha2", 0.0)),
    )
    trunc_cfg = proto.get("trunc", "auto")
    trunc = None
    if isinstance(trunc_cfg, dict):
        trunc = fock.TruncationConfig(
            n1=int(trunc_cfg["n1"]),
            n2=int(trunc_cfg["n2"]),
            tail_tol=float(trunc_cfg.get("tail_tol", fock.DEFAULT_TAIL_TOL)),
        )
    free_time = proto.get("free_time")
    return ProtocolSpec(
        params=params,
        free_time=None if free_time is None else float(free_time),
        mode=mode if mode is not None else proto.get("mode", "idealized"),
        outcome_policy=proto.get("outcome_policy", "both"),
        seed=seed if seed is not None else int(proto.get("seed", 0)),
        trunc=trunc,
        tail_tol=float(proto.get("tail_tol", fock.DEFAULT_TAIL_TOL)),
    )
