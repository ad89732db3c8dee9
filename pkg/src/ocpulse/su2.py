"""Exact 2x2 unitary algebra for spin-1/2 rotations.

Closed-form SU(2) exponentials, canonical axis-angle decomposition, and the
trace-overlap fidelity used throughout the optimizer and simulators.
Operators are plain ``(2, 2)`` complex ndarrays; most helpers also accept
batches of shape ``(..., 2, 2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Type alias for a (2, 2) complex unitary; purely documentary.
Su2Operator = np.ndarray

ID2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
# Basis ordered (I, X, Y, Z); index conventions elsewhere rely on this order.
PAULIS = np.stack([ID2, SIGMA_X, SIGMA_Y, SIGMA_Z])

X_AXIS = np.array([1.0, 0.0, 0.0])
Y_AXIS = np.array([0.0, 1.0, 0.0])
Z_AXIS = np.array([0.0, 0.0, 1.0])

# sin(theta/2) below this is treated as "no rotation"; axis defaults to z.
_DEGENERATE_SIN = 1e-12


@dataclass(frozen=True)
class RotationDecomposition:
    """Axis-angle form of a 2x2 unitary, U ~ exp(-i theta/2 axis.sigma).

    ``theta`` is canonicalized to [0, pi] (the pair (theta, axis) and
    (2 pi - theta, -axis) describe the same rotation; the representative
    with cos(theta/2) >= 0 is chosen).  For theta ~ 0 the axis is
    reported as z by convention.
    """

    theta: float
    axis: np.ndarray

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        axis.setflags(write=False)
        object.__setattr__(self, "axis", axis)


def expm_su2(axis, angle: float) -> np.ndarray:
    """Rotation exp(-i angle/2 n.sigma) about unit axis n.

    Parameters
    ----------
    axis : array_like, shape (3,)
        Rotation axis; normalized internally.
    angle : float
        Rotation angle in radians.

    Returns
    -------
    (2, 2) complex ndarray.
    """
    axis = np.asarray(axis, dtype=float)
    norm = float(np.linalg.norm(axis))
    if norm == 0.0:
        if angle == 0.0:
            return ID2.copy()
        raise ValueError("degenerate axis: zero-norm axis with nonzero angle")
    n = axis / norm
    c = np.cos(0.5 * angle)
    s = np.sin(0.5 * angle)
    return np.array(
        [
            [c - 1j * s * n[2], -s * (1j * n[0] + n[1])],
            [s * (-1j * n[0] + n[1]), c + 1j * s * n[2]],
        ]
    )


def expm_rotvec(omega, duration) -> np.ndarray:
    """Batched exp(-i duration/2 omega.sigma) for rotation vectors omega.

    Parameters
    ----------
    omega : array_like, shape (..., 3)
        Rotation-rate vectors in rad/s (or plain rotation vectors with
        ``duration=1``).
    duration : float or array_like broadcastable to omega[..., 0]

    Returns
    -------
    (..., 2, 2) complex ndarray; exactly unitary up to rounding.
    """
    omega = np.asarray(omega, dtype=float)
    w = np.linalg.norm(omega, axis=-1)
    half = 0.5 * w * np.asarray(duration)
    c = np.cos(half)
    # sin(half)/w, smooth through w = 0 (limit duration/2).
    k = 0.5 * np.asarray(duration) * np.sinc(half / np.pi)
    ox, oy, oz = omega[..., 0], omega[..., 1], omega[..., 2]
    out = np.empty(np.broadcast(c, ox).shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c - 1j * k * oz
    out[..., 0, 1] = -k * (1j * ox + oy)
    out[..., 1, 0] = k * (-1j * ox + oy)
    out[..., 1, 1] = c + 1j * k * oz
    return out


def quaternions(U: np.ndarray) -> np.ndarray:
    """Phase-stripped real unit quaternions (q0, q1, q2, q3) of unitaries.

    U ~ q0 I - i (q1 X + q2 Y + q3 Z) up to global phase, with q0 >= 0.
    When q0 ~ 0 the overall sign is fixed by making the largest-magnitude
    vector component positive, so equivalent inputs map to one
    representative.  Accepts shape (..., 2, 2).
    """
    U = np.asarray(U)
    a0 = 0.5 * (U[..., 0, 0] + U[..., 1, 1])
    ax = 0.5 * (U[..., 0, 1] + U[..., 1, 0])
    ay = 0.5j * (U[..., 0, 1] - U[..., 1, 0])
    az = 0.5 * (U[..., 0, 0] - U[..., 1, 1])
    q = np.stack([a0, 1j * ax, 1j * ay, 1j * az], axis=-1)
    # Strip the global phase using the largest component for stability.
    idx = np.argmax(np.abs(q), axis=-1)
    lead = np.take_along_axis(q, idx[..., None], axis=-1)[..., 0]
    phase = lead / np.abs(lead)
    qr = (q * np.conj(phase)[..., None]).real
    qr /= np.linalg.norm(qr, axis=-1, keepdims=True)
    # Canonical sign: q0 >= 0; tie broken by the dominant vector component.
    flip = qr[..., 0] < 0.0
    near_zero = np.abs(qr[..., 0]) < _DEGENERATE_SIN
    if np.any(near_zero):
        vec = qr[..., 1:]
        dom = np.take_along_axis(
            vec, np.argmax(np.abs(vec), axis=-1)[..., None], axis=-1
        )[..., 0]
        flip = np.where(near_zero, dom < 0.0, flip)
    return np.where(flip[..., None], -qr, qr)


def axis_angle(U: np.ndarray, tol: float = 1e-9) -> RotationDecomposition:
    """Canonical axis-angle decomposition of a single 2x2 unitary.

    Raises
    ------
    ValueError
        If U is not unitary within ``tol``.
    """
    U = np.asarray(U)
    if U.shape != (2, 2):
        raise ValueError(f"expected a (2, 2) operator, got shape {U.shape}")
    if unitarity_error(U) > tol:
        raise ValueError("operator is not unitary within tolerance")
    q = quaternions(U)
    s = float(np.linalg.norm(q[1:]))
    theta = 2.0 * float(np.arctan2(s, q[0]))
    if s < _DEGENERATE_SIN:
        axis = Z_AXIS.copy()
    else:
        axis = q[1:] / s
    return RotationDecomposition(theta=theta, axis=axis)


def rotation_matrices(U: np.ndarray) -> np.ndarray:
    """SO(3) action of unitaries on Bloch vectors, batched (..., 3, 3).

    R satisfies (U (m.sigma) U^dag) = (R m).sigma.
    """
    q = quaternions(U)
    c, v = q[..., 0], q[..., 1:]
    vv = np.einsum("...i,...j->...ij", v, v)
    eye = np.eye(3)
    cross = np.zeros(v.shape[:-1] + (3, 3))
    cross[..., 0, 1] = -v[..., 2]
    cross[..., 0, 2] = v[..., 1]
    cross[..., 1, 0] = v[..., 2]
    cross[..., 1, 2] = -v[..., 0]
    cross[..., 2, 0] = -v[..., 1]
    cross[..., 2, 1] = v[..., 0]
    s2 = np.einsum("...i,...i->...", v, v)
    return (
        (c**2 - s2)[..., None, None] * eye
        + 2.0 * vv
        + 2.0 * c[..., None, None] * cross
    )


def trace_overlap(A: np.ndarray, B: np.ndarray):
    """|Tr(A B^dag)|^2 / 4; equals 1 iff A and B agree up to global phase.

    Batched over leading axes of either argument.
    """
    t = np.einsum("...ij,...ij->...", np.asarray(A), np.conj(np.asarray(B)))
    out = 0.25 * np.abs(t) ** 2
    return float(out) if out.ndim == 0 else out


def unitarity_error(U: np.ndarray) -> float:
    """max |U^dag U - I| over the batch."""
    U = np.asarray(U)
    g = np.einsum("...ji,...jk->...ik", np.conj(U), U)
    return float(np.max(np.abs(g - ID2)))


def renormalize_unitary(U: np.ndarray) -> np.ndarray:
    """One Newton-Schulz step U (3 I - U^dag U)/2 toward the unitary manifold.

    Adequate for the rounding-level drift of long propagator products; not a
    substitute for a polar decomposition on badly non-unitary input.
    """
    U = np.asarray(U)
    g = np.einsum("...ji,...jk->...ik", np.conj(U), U)
    return 0.5 * (U @ (3.0 * ID2 - g))
