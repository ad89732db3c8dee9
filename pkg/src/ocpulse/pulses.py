"""Piecewise-constant RF waveforms and static isochromat distributions.

Amplitudes are angular nutation rates in rad/s (a 2*pi*5000 rad/s pulse
turns the magnetization through pi in 100 us on resonance).  Phases are in
radians, stored wrapped to [0, 2*pi).  Guard delays model transmitter
ring-down windows before and after the shaped part.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PulseWaveform:
    """A shaped pulse: uniform step length dt, per-step amplitude and phase.

    ``a_max`` records the hardware amplitude cap.  Construction does not
    enforce amplitudes <= a_max (see :func:`clip_amplitudes`, which
    establishes that invariant); optimizer and file outputs always satisfy
    it.  Negative amplitudes are representable transiently and are folded
    into a pi phase shift by :func:`clip_amplitudes`.
    """

    dt: float
    amplitudes: np.ndarray
    phases: np.ndarray
    a_max: float
    pre_delay: float = 0.0
    post_delay: float = 0.0

    def __post_init__(self):
        amps = np.atleast_1d(np.asarray(self.amplitudes, dtype=float))
        phases = np.mod(np.atleast_1d(np.asarray(self.phases, dtype=float)), TWO_PI)
        if amps.shape != phases.shape or amps.ndim != 1:
            raise ValueError("amplitudes and phases must be 1-d and the same length")
        if not (self.dt > 0.0 and np.isfinite(self.dt)):
            raise ValueError(f"dt must be positive and finite, got {self.dt}")
        if not (self.a_max > 0.0 and np.isfinite(self.a_max)):
            raise ValueError(f"a_max must be positive and finite, got {self.a_max}")
        if self.pre_delay < 0.0 or self.post_delay < 0.0:
            raise ValueError("guard delays must be nonnegative")
        if not (np.all(np.isfinite(amps)) and np.all(np.isfinite(phases))):
            raise ValueError("step values must be finite")
        for name, arr in (("amplitudes", amps), ("phases", phases)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_steps(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def duration(self) -> float:
        """Shaped duration n_steps * dt, guards excluded."""
        return self.n_steps * self.dt

    @property
    def total_duration(self) -> float:
        return self.pre_delay + self.duration + self.post_delay

    @property
    def steps(self):
        """(amplitude, phase) pairs in time order."""
        return tuple(zip(self.amplitudes.tolist(), self.phases.tolist()))

    def cartesian_controls(self) -> np.ndarray:
        """(n_steps, 2) array of (A cos phi, A sin phi)."""
        return np.stack(
            [
                self.amplitudes * np.cos(self.phases),
                self.amplitudes * np.sin(self.phases),
            ],
            axis=-1,
        )

    def with_steps(self, amplitudes, phases) -> "PulseWaveform":
        """Same timing metadata, new step values."""
        return replace(self, amplitudes=np.asarray(amplitudes), phases=np.asarray(phases))


def hard_pulse(nutation: float, phase: float, a_max: float) -> PulseWaveform:
    """Single rectangular step at full amplitude reaching the given nutation.

    hard_pulse(pi, pi/2, 2*pi*5000) is the 100 us reference pi pulse about y.
    """
    if nutation <= 0.0:
        raise ValueError(f"nutation must be positive, got {nutation}")
    if a_max <= 0.0:
        raise ValueError(f"a_max must be positive, got {a_max}")
    return PulseWaveform(
        dt=nutation / a_max,
        amplitudes=np.array([a_max]),
        phases=np.array([phase]),
        a_max=a_max,
    )


def symmetrize_excitation(p: PulseWaveform) -> PulseWaveform:
    """Refocusing pulse built from an excitation pulse.

    Concatenates a phase-reversed copy of ``p`` (phi -> -phi) with a
    time-reversed copy (step order reversed).  The output has twice the
    steps of the input.  Guard delays cannot be carried through the
    internal junction, so the input must have none.
    """
    if p.n_steps == 0:
        raise ValueError("cannot symmetrize an empty waveform")
    if p.pre_delay != 0.0 or p.post_delay != 0.0:
        raise ValueError("symmetrization requires a waveform without guard delays")
    amps = np.concatenate([p.amplitudes, p.amplitudes[::-1]])
    phases = np.concatenate([np.mod(-p.phases, TWO_PI), p.phases[::-1]])
    return PulseWaveform(dt=p.dt, amplitudes=amps, phases=phases, a_max=p.a_max)


def clip_amplitudes(p: PulseWaveform) -> PulseWaveform:
    """Canonical form with amplitudes in [0, a_max].

    Negative amplitudes are folded into a pi phase shift first, then values
    above the cap are clipped to it.  Idempotent.
    """
    amps = p.amplitudes.copy()
    phases = p.phases.copy()
    neg = amps < 0.0
    amps[neg] = -amps[neg]
    phases[neg] = np.mod(phases[neg] + np.pi, TWO_PI)
    np.minimum(amps, p.a_max, out=amps)
    return p.with_steps(amps, phases)


def waveform_template(
    n_steps: int,
    dt: float,
    a_max: float,
    pre_delay: float = 0.0,
    post_delay: float = 0.0,
    amplitude: float = 0.0,
    phase: float = 0.0,
) -> PulseWaveform:
    """Constant waveform fixing the timing grid; useful as an optimizer seed."""
    return PulseWaveform(
        dt=dt,
        amplitudes=np.full(n_steps, float(amplitude)),
        phases=np.full(n_steps, float(phase)),
        a_max=a_max,
        pre_delay=pre_delay,
        post_delay=post_delay,
    )


@dataclass(frozen=True)
class EnsembleDistribution:
    """Weighted static ensemble of (resonance offset, RF scale) points.

    ``offsets`` are angular offsets Delta-omega in rad/s, ``rf_scales`` are
    dimensionless B1 multipliers, ``weights`` are strictly positive and sum
    to one.  Point order is significant and preserved by every consumer.
    """

    offsets: np.ndarray
    rf_scales: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        offs = np.atleast_1d(np.asarray(self.offsets, dtype=float))
        scales = np.atleast_1d(np.asarray(self.rf_scales, dtype=float))
        weights = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if not (offs.shape == scales.shape == weights.shape) or offs.ndim != 1:
            raise ValueError("offsets, rf_scales, weights must be 1-d and equal length")
        if offs.shape[0] == 0:
            raise ValueError("distribution must contain at least one point")
        if np.any(weights <= 0.0):
            raise ValueError("weights must be strictly positive")
        if abs(weights.sum() - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {weights.sum()!r}")
        pairs = set(zip(offs.tolist(), scales.tolist()))
        if len(pairs) != offs.shape[0]:
            raise ValueError("duplicate (offset, rf_scale) points")
        for name, arr in (("offsets", offs), ("rf_scales", scales), ("weights", weights)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_points(self) -> int:
        return self.offsets.shape[0]

    def points(self):
        """(offset, rf_scale, weight) triples in stored order."""
        return tuple(
            zip(self.offsets.tolist(), self.rf_scales.tolist(), self.weights.tolist())
        )

    @classmethod
    def single_point(cls, offset: float = 0.0, rf_scale: float = 1.0):
        return cls(np.array([offset]), np.array([rf_scale]), np.array([1.0]))

    @classmethod
    def product(cls, offsets, rf_scales):
        """Uniform-weight cross product, offset-major order."""
        offsets = np.atleast_1d(np.asarray(offsets, dtype=float))
        rf_scales = np.atleast_1d(np.asarray(rf_scales, dtype=float))
        n = offsets.size * rf_scales.size
        return cls(
            np.repeat(offsets, rf_scales.size),
            np.tile(rf_scales, offsets.size),
            np.full(n, 1.0 / n),
        )


def uniform_ladder_distribution(
    half_bandwidth: float,
    delta: float,
    rf_scales=(1.0,),
    jitter_fraction: float = 0.0,
    seed=0,
) -> EnsembleDistribution:
    """Evenly spaced offset comb crossed with RF scales, uniform weights.

    Offsets sit at (-M .. M) * delta with M = floor(half_bandwidth / delta),
    each multiplied by (1 + u) with u drawn uniformly from
    [-jitter_fraction, +jitter_fraction]; zero stays exactly zero.  Jitter
    keeps isochromat spacings slightly unequal so periodic revivals of the
    discretized ensemble are suppressed.  half_bandwidth == 0 gives the
    single on-resonance point.

    Parameters
    ----------
    half_bandwidth, delta : float
        Angular frequencies, rad/s.
    seed : int or sequence of int
        Feeds ``numpy.random.default_rng``; the comb is reproducible.
    """
    if delta <= 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    if not 0.0 <= jitter_fraction < 0.5:
        raise ValueError(f"jitter_fraction must be in [0, 0.5), got {jitter_fraction}")
    if half_bandwidth < 0.0:
        raise ValueError("half_bandwidth must be nonnegative")
    if 0.0 < half_bandwidth < delta:
        raise ValueError("half_bandwidth smaller than the comb spacing delta")
    scales = np.atleast_1d(np.asarray(rf_scales, dtype=float))
    if scales.size == 0 or np.any(scales <= 0.0):
        raise ValueError("rf_scales must be nonempty and positive")
    m = int(np.floor(half_bandwidth / delta + 1e-9))
    base = np.arange(-m, m + 1, dtype=float) * delta
    rng = np.random.default_rng(seed)
    factors = 1.0 + rng.uniform(-jitter_fraction, jitter_fraction, size=base.size)
    return EnsembleDistribution.product(base * factors, scales)
