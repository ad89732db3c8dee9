"""On-disk formats: waveform and distribution JSON, CSV exports.

JSON is the canonical, lossless interchange format (floats round-trip at
full precision).  CSV files use spectrometer-friendly units (Hz, degrees,
seconds) and are meant for plotting and console import, not as a lossless
store.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .channel import PauliChannelFit
from .pulses import EnsembleDistribution, PulseWaveform

TWO_PI = 2.0 * np.pi


def waveform_to_dict(p: PulseWaveform) -> dict:
    return {
        "dt_s": p.dt,
        "pre_delay_s": p.pre_delay,
        "post_delay_s": p.post_delay,
        "a_max_rad_s": p.a_max,
        "steps": [
            {"amp_rad_s": a, "phase_rad": ph}
            for a, ph in zip(p.amplitudes.tolist(), p.phases.tolist())
        ],
    }


def waveform_from_dict(data: dict) -> PulseWaveform:
    try:
        steps = data["steps"]
        return PulseWaveform(
            dt=float(data["dt_s"]),
            amplitudes=np.array([s["amp_rad_s"] for s in steps], dtype=float),
            phases=np.array([s["phase_rad"] for s in steps], dtype=float),
            a_max=float(data["a_max_rad_s"]),
            pre_delay=float(data.get("pre_delay_s", 0.0)),
            post_delay=float(data.get("post_delay_s", 0.0)),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed waveform record: {exc}") from exc


def save_waveform_json(p: PulseWaveform, path) -> None:
    Path(path).write_text(json.dumps(waveform_to_dict(p), indent=1))


def load_waveform_json(path) -> PulseWaveform:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON: {exc}") from exc
    return waveform_from_dict(data)


def save_waveform_csv(p: PulseWaveform, path) -> None:
    """Rows time_s, amp_hz, phase_deg; time is the step start on the shaped
    grid (guards not included)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["time_s", "amp_hz", "phase_deg"])
        for j in range(p.n_steps):
            w.writerow(
                [
                    repr(float(j * p.dt)),
                    repr(float(p.amplitudes[j] / TWO_PI)),
                    repr(float(np.degrees(p.phases[j]))),
                ]
            )


def load_waveform_csv(
    path, a_max: float | None = None, pre_delay: float = 0.0, post_delay: float = 0.0
) -> PulseWaveform:
    """Import a time_s, amp_hz, phase_deg table as a waveform.

    The grid must be uniform; dt comes from the time column (at least two
    rows).  a_max defaults to the largest amplitude present.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:3]] != [
            "time_s",
            "amp_hz",
            "phase_deg",
        ]:
            raise ValueError(f"{path}: expected header time_s,amp_hz,phase_deg")
        rows = [(float(r[0]), float(r[1]), float(r[2])) for r in reader if r]
    if len(rows) < 2:
        raise ValueError(f"{path}: need at least two rows to infer dt")
    times = np.array([r[0] for r in rows])
    dts = np.diff(times)
    if np.max(np.abs(dts - dts[0])) > 1e-9 * max(dts[0], 1e-30):
        raise ValueError(f"{path}: nonuniform time grid")
    amps = np.array([r[1] for r in rows]) * TWO_PI
    phases = np.radians(np.array([r[2] for r in rows]))
    return PulseWaveform(
        dt=float(dts[0]),
        amplitudes=amps,
        phases=phases,
        a_max=float(a_max) if a_max is not None else float(np.max(np.abs(amps))),
        pre_delay=pre_delay,
        post_delay=post_delay,
    )


def distribution_to_dict(d: EnsembleDistribution) -> dict:
    return {
        "points": [
            {"offset_hz": off / TWO_PI, "rf_scale": rf, "weight": w}
            for off, rf, w in d.points()
        ]
    }


def distribution_from_dict(data: dict) -> EnsembleDistribution:
    try:
        pts = data["points"]
        offsets = np.array([p["offset_hz"] for p in pts], dtype=float) * TWO_PI
        scales = np.array([p.get("rf_scale", 1.0) for p in pts], dtype=float)
        weights = np.array([p["weight"] for p in pts], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed distribution record: {exc}") from exc
    return EnsembleDistribution(offsets, scales, weights)


def save_distribution_json(d: EnsembleDistribution, path) -> None:
    Path(path).write_text(json.dumps(distribution_to_dict(d), indent=1))


def load_distribution_json(path) -> EnsembleDistribution:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON: {exc}") from exc
    return distribution_from_dict(data)


def write_csv(path, header, rows) -> None:
    """Small CSV writer; floats are serialized with repr for round-trip
    stable output."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            # float() strips numpy scalar types whose repr does not parse back
            w.writerow([repr(float(x)) if isinstance(x, float) else x for x in row])


def channel_fit_to_dict(fit: PauliChannelFit) -> dict:
    """JSON-safe summary; infinite decay times map to null."""

    def _finite(x):
        return None if not np.isfinite(x) else x

    return {
        "t2_pulse_s": _finite(fit.t2_pulse),
        "t2_pulse_cycles": _finite(fit.t2_pulse_cycles),
        "m_infinity": fit.m_infinity,
        "cycle_time_s": fit.cycle_time,
        "fit_overlap": fit.fit_overlap,
        "c": {"i": fit.c_i, "x": fit.c_x, "y": fit.c_y, "z": fit.c_z},
        "probs": [
            [n + 1] + row
            for n, row in enumerate(fit.per_cycle_probs.tolist())
        ],
    }


def save_channel_fit_json(fit: PauliChannelFit, path) -> None:
    Path(path).write_text(json.dumps(channel_fit_to_dict(fit), indent=1))


# Reference pulses shipped with the package (see scripts/run_full_pipeline.py
# for the exact seeded run that produced them).
#   oct_rfi        1 ms refocusing pulse, comb-trained to |dw|/2pi <= 8 kHz
#                  then re-optimized over +/-10% RF scatter.
#   oct_broadband  1 ms pulse polished over the full +/-10 kHz band at
#                  nominal RF (best echo-visibility instance).
REFERENCE_PULSES = ("oct_rfi", "oct_broadband")


def reference_waveform(name: str) -> PulseWaveform:
    """Load one of the packaged reference pulses by short name."""
    from importlib import resources

    if name not in REFERENCE_PULSES:
        raise ValueError(
            f"unknown reference pulse {name!r}; have {', '.join(REFERENCE_PULSES)}"
        )
    ref = resources.files("ocpulse") / "data" / f"{name}.json"
    return waveform_from_dict(json.loads(ref.read_text()))
