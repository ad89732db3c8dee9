"""Gradient-ascent pulse engineering over a static ensemble.

Controls are the Cartesian pair u1 = A cos(phi), u2 = A sin(phi) per step.
The objective is the ensemble-averaged trace overlap with a target unitary;
its exact first-order gradient comes from one forward and one backward
propagator sweep per ensemble point.  Steps follow the averaged gradient
with a backtracking line search, so the fidelity history is monotone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .pulses import EnsembleDistribution, PulseWaveform
from .propagation import free_propagator, step_propagators
from .su2 import trace_overlap


class Termination(enum.Enum):
    TARGET_REACHED = "target_reached"
    STALLED = "stalled"
    MAX_ITERATIONS = "max_iterations"


@dataclass(frozen=True)
class GrapeConfig:
    """Ascent knobs.

    step_size_init of ``None`` auto-scales the first trial step so the
    largest control change is 5% of the amplitude cap.  The line search
    grows the step by ls_growth after an accepted iteration and shrinks it
    by ls_shrink on rejection, at most ls_max_probes shrinks per
    iteration.  Iterations stop at target_fidelity, on an improvement
    below improvement_threshold (stall), or at max_iterations.
    """

    step_size_init: float | None = None
    ls_growth: float = 1.5
    ls_shrink: float = 0.5
    ls_max_probes: int = 20
    improvement_threshold: float = 1e-7
    max_iterations: int = 2000
    target_fidelity: float = 1.0

    def __post_init__(self):
        if self.step_size_init is not None and self.step_size_init <= 0.0:
            raise ValueError("step_size_init must be positive")
        if self.ls_growth <= 1.0 or not 0.0 < self.ls_shrink < 1.0:
            raise ValueError("need ls_growth > 1 and 0 < ls_shrink < 1")
        if self.ls_max_probes < 1 or self.max_iterations < 1:
            raise ValueError("ls_max_probes and max_iterations must be >= 1")
        if self.improvement_threshold <= 0.0:
            raise ValueError("improvement_threshold must be positive")
        if not 0.0 < self.target_fidelity <= 1.0:
            raise ValueError("target_fidelity must be in (0, 1]")


@dataclass(frozen=True)
class GrapeReport:
    """Outcome of one ascent run.

    fidelity_history[0] is the starting fidelity; one entry follows per
    accepted iteration, and step_sizes aligns with those accepted steps.
    """

    final_waveform: PulseWaveform
    fidelity_history: np.ndarray
    step_sizes: np.ndarray
    iterations: int
    termination: Termination


def _ensemble_fidelity(p: PulseWaveform, d: EnsembleDistribution, target):
    """Averaged fidelity of a waveform without the gradient sweep."""
    steps = step_propagators(p, d.offsets, d.rf_scales)
    U = free_propagator(d.offsets, p.pre_delay)
    for j in range(steps.shape[0]):
        U = steps[j] @ U
    U = free_propagator(d.offsets, p.post_delay) @ U
    return float(np.dot(d.weights, trace_overlap(U, target)))


def _fidelity_and_gradients_raw(p: PulseWaveform, d: EnsembleDistribution, target):
    """Pointwise fidelities (P,) and exact gradients (P, N, 2) wrt (u1, u2).

    Forward products X_j include the pre-delay; backward products fold the
    post-delay into the target, so guard delays are part of the objective.
    """
    n, P = p.n_steps, d.n_points
    steps = step_propagators(p, d.offsets, d.rf_scales)

    X = np.empty((n, P, 2, 2), dtype=complex)
    acc = free_propagator(d.offsets, p.pre_delay)
    for j in range(n):
        acc = steps[j] @ acc
        X[j] = acc
    U_total = free_propagator(d.offsets, p.post_delay) @ acc

    B = np.empty((n, P, 2, 2), dtype=complex)
    acc = (
        free_propagator(d.offsets, p.post_delay).conj().swapaxes(-1, -2)
        @ np.broadcast_to(target, (P, 2, 2))
    )
    B[n - 1] = acc
    for j in range(n - 1, 0, -1):
        acc = steps[j].conj().swapaxes(-1, -2) @ acc
        B[j - 1] = acc

    # t = Tr(target^dag U)/2; fidelity |t|^2.
    t = 0.5 * np.einsum("pij,pij->p", U_total, np.conj(np.broadcast_to(target, (P, 2, 2))))
    fids = np.abs(t) ** 2

    # C_j = X_j B_j^dag;  Tr(B_j^dag sigma_k X_j) = Tr(sigma_k C_j).
    C = np.einsum("npab,npcb->npac", X, np.conj(B))
    tx = C[..., 0, 1] + C[..., 1, 0]
    ty = 1j * (C[..., 0, 1] - C[..., 1, 0])
    # dPhi/du_k(j) = -dt (omega1/2) Re{ i Tr(B_j^dag sigma_k X_j) conj(t) }
    pref = -p.dt * 0.5 * d.rf_scales[None, :]
    gx = pref * np.real(1j * tx * np.conj(t)[None, :])
    gy = pref * np.real(1j * ty * np.conj(t)[None, :])
    grads = np.stack([gx, gy], axis=-1).transpose(1, 0, 2)
    return fids, grads


def fidelity_and_gradients(p: PulseWaveform, point, target):
    """Fidelity and (n_steps, 2) gradient wrt (u1, u2) at one ensemble point.

    ``point`` is (delta_omega, omega1_scale).
    """
    delta_omega, omega1_scale = point
    d = EnsembleDistribution.single_point(delta_omega, omega1_scale)
    fids, grads = _fidelity_and_gradients_raw(p, d, target)
    return float(fids[0]), grads[0]


def _averaged_eval(p: PulseWaveform, d: EnsembleDistribution, target):
    fids, grads = _fidelity_and_gradients_raw(p, d, target)
    return float(np.dot(d.weights, fids)), np.einsum("p,pnk->nk", d.weights, grads)


def grape_ascend(
    p0: PulseWaveform,
    d: EnsembleDistribution,
    target: np.ndarray,
    cfg: GrapeConfig | None = None,
) -> GrapeReport:
    """Maximize the ensemble-averaged fidelity starting from p0.

    Each iteration evaluates the averaged gradient, then probes
    u + eps * g with eps shrinking until the averaged fidelity strictly
    improves; amplitudes are clipped to a_max after every update, so the
    returned waveform always respects the cap.  Deterministic: identical
    inputs give an identical report.

    Raises
    ------
    ValueError
        If p0 exceeds its amplitude cap.
    RuntimeError
        On non-finite fidelity or gradient values.
    """
    if cfg is None:
        cfg = GrapeConfig()
    if p0.n_steps == 0:
        raise ValueError("cannot optimize an empty waveform")
    if np.max(p0.amplitudes) > p0.a_max * (1.0 + 1e-12) or np.min(p0.amplitudes) < 0.0:
        raise ValueError("initial amplitudes must lie in [0, a_max]")

    u = p0.cartesian_controls()
    u1, u2 = u[:, 0].copy(), u[:, 1].copy()
    p = p0

    fid, grad = _averaged_eval(p, d, target)
    if not (np.isfinite(fid) and np.all(np.isfinite(grad))):
        raise RuntimeError("non-finite objective at the starting point")
    history = [fid]
    accepted_steps: list[float] = []
    eps = cfg.step_size_init
    termination = Termination.MAX_ITERATIONS

    for _ in range(cfg.max_iterations):
        if fid >= cfg.target_fidelity:
            termination = Termination.TARGET_REACHED
            break
        gmax = float(np.max(np.abs(grad)))
        if eps is None:
            eps = 0.05 * p0.a_max / gmax if gmax > 0.0 else 1.0

        improvement = None
        for _probe in range(cfg.ls_max_probes):
            v1 = u1 + eps * grad[:, 0]
            v2 = u2 + eps * grad[:, 1]
            amps = np.minimum(np.hypot(v1, v2), p0.a_max)
            phases = np.arctan2(v2, v1)
            trial = p.with_steps(amps, phases)
            f_trial = _ensemble_fidelity(trial, d, target)
            if not np.isfinite(f_trial):
                raise RuntimeError("non-finite fidelity during line search")
            if f_trial > fid:
                improvement = f_trial - fid
                u1, u2 = amps * np.cos(phases), amps * np.sin(phases)
                p = trial
                fid = f_trial
                accepted_steps.append(eps)
                eps *= cfg.ls_growth
                break
            eps *= cfg.ls_shrink
        if improvement is None:
            termination = Termination.STALLED
            break
        history.append(fid)
        if fid >= cfg.target_fidelity:
            termination = Termination.TARGET_REACHED
            break
        if improvement < cfg.improvement_threshold:
            termination = Termination.STALLED
            break
        fid_check, grad = _averaged_eval(p, d, target)
        if not np.all(np.isfinite(grad)):
            raise RuntimeError("non-finite gradient")
        fid = fid_check

    return GrapeReport(
        final_waveform=p,
        fidelity_history=np.asarray(history),
        step_sizes=np.asarray(accepted_steps),
        iterations=len(history) - 1,
        termination=termination,
    )


def random_waveform(template: PulseWaveform, rng) -> PulseWaveform:
    """Random start on template's grid: amplitudes in [0.3, 0.8] a_max,
    phases uniform."""
    n = template.n_steps
    amps = rng.uniform(0.3, 0.8, size=n) * template.a_max
    phases = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return template.with_steps(amps, phases)


def multistart_reports(
    d: EnsembleDistribution,
    target: np.ndarray,
    cfg: GrapeConfig | None,
    n_starts: int,
    seed: int,
    *,
    template: PulseWaveform,
    max_workers: int | None = None,
) -> list[GrapeReport]:
    """Independent ascents from seeded random starts, in start order.

    Start j is drawn from ``numpy.random.SeedSequence(seed).spawn`` child j;
    results do not depend on max_workers.
    """
    if n_starts < 1:
        raise ValueError("n_starts must be >= 1")
    children = np.random.SeedSequence(seed).spawn(n_starts)
    starts = [random_waveform(template, np.random.default_rng(c)) for c in children]
    if max_workers is not None and max_workers > 1 and n_starts > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(lambda p0: grape_ascend(p0, d, target, cfg), starts))
    return [grape_ascend(p0, d, target, cfg) for p0 in starts]


def multistart_histogram(
    d: EnsembleDistribution,
    target: np.ndarray,
    cfg: GrapeConfig | None,
    n_starts: int,
    seed: int,
    *,
    template: PulseWaveform,
) -> np.ndarray:
    """Final fidelities of independent ascents from random starts, sorted.

    Reproducible from the seed; n_starts = 1 reduces to a single
    :func:`grape_ascend` from that seeded start.
    """
    reports = multistart_reports(d, target, cfg, n_starts, seed, template=template)
    return np.sort([float(r.fidelity_history[-1]) for r in reports])
