"""Rigid-body transform and rotation algebra.

Conventions used throughout the package:

* a pose is a 4x4 numpy array with orthonormal upper-left 3x3 rotation,
  translation (meters) in the last column and bottom row (0, 0, 0, 1);
* a rotation vector is a length-3 array whose direction is the rotation
  axis and whose magnitude is the angle in radians, kept in [0, pi];
* an axis-angle pose is the length-6 array (px, py, pz, wx, wy, wz).

Everything here is a pure function on immutable values and safe to call
concurrently.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NotAntisymmetricError

# below this angle the first-order log/exp series is used; above pi minus
# this the axis is recovered from the symmetric part instead
_SMALL_ANGLE = 1e-4

ROTATION_TOL = 1e-9


def wrap_angle(x: float) -> float:
    """Map an angle to (-pi, pi]."""
    y = math.remainder(x, math.tau)
    return math.pi if y <= -math.pi else y


def wrap_angles(x) -> np.ndarray:
    """Elementwise wrap_angle for arrays."""
    x = np.asarray(x, dtype=float)
    y = np.mod(x + np.pi, 2.0 * np.pi) - np.pi
    return np.where(y <= -np.pi, np.pi, y)


def skew(w) -> np.ndarray:
    """Cross-product matrix: skew(w) @ v == cross(w, v)."""
    wx, wy, wz = np.asarray(w, dtype=float)
    return np.array([
        [0.0, -wz, wy],
        [wz, 0.0, -wx],
        [-wy, wx, 0.0],
    ])


def vee(m, tol: float = ROTATION_TOL) -> np.ndarray:
    """Inverse of skew. Rejects matrices whose symmetric part exceeds tol."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise NotAntisymmetricError(f"expected 3x3 matrix, got {m.shape}")
    sym = np.abs(m + m.T).max()
    if sym > 2.0 * tol:
        raise NotAntisymmetricError(f"symmetric part {sym:.3e} exceeds tolerance {tol:.3e}")
    a = 0.5 * (m - m.T)
    return np.array([a[2, 1], a[0, 2], a[1, 0]])


def compose(a, b) -> np.ndarray:
    """Product of two rigid transforms (apply b first, then a)."""
    return np.asarray(a, dtype=float) @ np.asarray(b, dtype=float)


def invert(t) -> np.ndarray:
    """Closed-form rigid inverse: rotation transposed, translation -R^T p."""
    t = np.asarray(t, dtype=float)
    r = t[:3, :3]
    out = np.eye(4)
    out[:3, :3] = r.T
    out[:3, 3] = -r.T @ t[:3, 3]
    return out


def make_transform(rotation, translation) -> np.ndarray:
    t = np.eye(4)
    t[:3, :3] = np.asarray(rotation, dtype=float)
    t[:3, 3] = np.asarray(translation, dtype=float)
    return t


def rotation_drift(r) -> float:
    """Max-abs departure of R^T R from the identity."""
    r = np.asarray(r, dtype=float)
    return float(np.abs(r.T @ r - np.eye(3)).max())


def project_rotation(m) -> np.ndarray:
    """Nearest proper rotation in the Frobenius sense (via SVD)."""
    u, _, vt = np.linalg.svd(np.asarray(m, dtype=float))
    if np.linalg.det(u @ vt) < 0.0:
        u = u.copy()
        u[:, -1] = -u[:, -1]
    return u @ vt


def require_transform(t, tol: float = ROTATION_TOL) -> np.ndarray:
    """Validate shape, bottom row, finiteness and rotation orthonormality."""
    t = np.asarray(t, dtype=float)
    if t.shape != (4, 4):
        raise ValueError(f"expected 4x4 transform, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise ValueError("transform contains non-finite entries")
    if np.abs(t[3] - np.array([0.0, 0.0, 0.0, 1.0])).max() > tol:
        raise ValueError("bottom row must be (0, 0, 0, 1)")
    drift = rotation_drift(t[:3, :3])
    if drift > tol:
        raise ValueError(f"rotation block drift {drift:.3e} exceeds {tol:.3e}")
    if abs(np.linalg.det(t[:3, :3]) - 1.0) > max(tol, 1e-9):
        raise ValueError("rotation block is not proper (det != 1)")
    return t


def axis_angle_to_rotation(w) -> np.ndarray:
    """Rodrigues formula; series expansion below the small-angle cutoff."""
    w = np.asarray(w, dtype=float)
    theta = float(np.linalg.norm(w))
    k = skew(w)
    if theta < 1e-8:
        return np.eye(3) + k + 0.5 * (k @ k)
    k /= theta
    return np.eye(3) + math.sin(theta) * k + (1.0 - math.cos(theta)) * (k @ k)


def rotation_to_axis_angle(r) -> np.ndarray:
    """Rotation vector of a rotation matrix, magnitude in [0, pi].

    The angle comes from atan2 of the antisymmetric-part norm against the
    trace, which stays accurate at both ends of the range. Near pi the
    axis is recovered from the symmetric part (the antisymmetric part
    vanishes there); near zero the first-order vee is returned directly.
    """
    r = np.asarray(r, dtype=float)
    a = 0.5 * (r - r.T)
    v = np.array([a[2, 1], a[0, 2], a[1, 0]])
    s = float(np.linalg.norm(v))
    c = 0.5 * (float(np.trace(r)) - 1.0)
    c = min(1.0, max(-1.0, c))
    theta = math.atan2(s, c)

    if theta < _SMALL_ANGLE:
        return v
    if math.pi - theta < _SMALL_ANGLE:
        # u u^T = (S - c I) / (1 - c), anchored on the largest diagonal
        w_mat = (0.5 * (r + r.T) - c * np.eye(3)) / (1.0 - c)
        k = int(np.argmax(np.diag(w_mat)))
        axis = w_mat[k] / math.sqrt(max(w_mat[k, k], 1e-300))
        axis /= np.linalg.norm(axis)
        if s > 1e-12:
            if float(axis @ v) < 0.0:
                axis = -axis
        else:
            # exactly pi: both signs are valid, pick one deterministically
            for comp in axis:
                if abs(comp) > 1e-12:
                    if comp < 0.0:
                        axis = -axis
                    break
        return theta * axis
    return (theta / s) * v


def rotation_error(r_desired, r_current) -> np.ndarray:
    """Rotation vector taking r_current onto r_desired (in the base frame).

    Zero exactly when the inputs agree; for small discrepancies this
    reduces to the first-order angular-velocity error.
    """
    r_desired = np.asarray(r_desired, dtype=float)
    r_current = np.asarray(r_current, dtype=float)
    return rotation_to_axis_angle(r_desired @ r_current.T)


def pose_to_axis_angle(t) -> np.ndarray:
    """(px, py, pz, wx, wy, wz) encoding of a 4x4 pose."""
    t = np.asarray(t, dtype=float)
    return np.concatenate([t[:3, 3], rotation_to_axis_angle(t[:3, :3])])


def axis_angle_to_pose(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (6,):
        raise ValueError(f"expected 6 values (px, py, pz, wx, wy, wz), got shape {v.shape}")
    return make_transform(axis_angle_to_rotation(v[3:]), v[:3])


def pose_max_abs_diff(a, b) -> float:
    """Max-abs difference over the 12 meaningful entries of two poses."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.abs(a[:3, :] - b[:3, :]).max())
