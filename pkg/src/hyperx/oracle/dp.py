"""Optimal expected return for the sparse directional task, by backward
value iteration over a discretized (position, velocity, belief) space.

Positions and velocities live on fine grids with bilinear interpolation of
the value function at the (continuous) successor states; beliefs take the
three reachable values (prior, left, right). Under the symmetric prior the
expected dense reward is zero and crossing the boundary with nonzero
velocity splits the value into the two resolved branches. Returns are
undiscounted, matching evaluation.
"""

from functools import lru_cache

import numpy as np

from ..envs import sparsedir

X_MAX = 9.0
X_STEP = 0.05
V_STEP = 0.005
ACTIONS = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])


def _interp_axis(values, grid_lo, step, n):
    """Indices and weights for linear interpolation on a uniform grid."""
    pos = np.clip((values - grid_lo) / step, 0.0, n - 1.000001)
    i0 = np.floor(pos).astype(np.int64)
    w1 = pos - i0
    return i0, i0 + 1, 1.0 - w1, w1


@lru_cache(maxsize=None)
def _solve(horizon):
    dt, vmax, c = sparsedir.DT, sparsedir.V_MAX, sparsedir.CONTROL_COST
    lam, gain = sparsedir.FRICTION, sparsedir.VEL_GAIN
    bound = sparsedir.SPARSE_BOUND
    xs = np.arange(-X_MAX, X_MAX + 1e-9, X_STEP)
    vs = np.arange(-vmax, vmax + 1e-9, V_STEP)
    nx, nv, na = len(xs), len(vs), len(ACTIONS)

    # x' = x + v * dt: depends on (x, v) only
    x_next = np.clip(xs[:, None] + vs[None, :] * dt, -X_MAX, X_MAX)
    xi0, xi1, xw0, xw1 = _interp_axis(x_next, -X_MAX, X_STEP, nx)    # (nx, nv)
    # v' = clip(lam v + gain a): depends on (v, a) only
    v_next = np.clip(lam * vs[:, None] + gain * ACTIONS[None, :], -vmax, vmax)
    vi0, vi1, vw0, vw1 = _interp_axis(v_next, -vmax, V_STEP, nv)     # (nv, na)

    x_out = np.abs(x_next) > bound                                   # (nx, nv)
    ctrl = -c * np.square(ACTIONS)

    def lookup(V, ia):
        """Bilinear interpolation of V at (x_next, v_next[:, ia])."""
        a0, a1 = vi0[:, ia], vi1[:, ia]
        w0, w1 = vw0[:, ia], vw1[:, ia]
        part0 = V[xi0, a0[None, :].repeat(nx, 0)] * w0 + V[xi0, a1[None, :].repeat(nx, 0)] * w1
        part1 = V[xi1, a0[None, :].repeat(nx, 0)] * w0 + V[xi1, a1[None, :].repeat(nx, 0)] * w1
        return xw0 * part0 + xw1 * part1

    v_left = np.zeros((nx, nv))
    v_right = np.zeros((nx, nv))
    v_prior = np.zeros((nx, nv))
    for _ in range(horizon):
        q_left = np.empty((nx, nv, na))
        q_right = np.empty((nx, nv, na))
        q_prior = np.empty((nx, nv, na))
        for ia in range(na):
            dense = x_out * v_next[None, :, ia]
            q_right[:, :, ia] = ctrl[ia] + dense + lookup(v_right, ia)
            q_left[:, :, ia] = ctrl[ia] - dense + lookup(v_left, ia)
            informative = x_out & (v_next[None, :, ia] != 0.0)
            cont = np.where(informative,
                            0.5 * (lookup(v_left, ia) + lookup(v_right, ia)),
                            lookup(v_prior, ia))
            q_prior[:, :, ia] = ctrl[ia] + cont
        v_left = q_left.max(axis=2)
        v_right = q_right.max(axis=2)
        v_prior = q_prior.max(axis=2)

    i0x = int(round(X_MAX / X_STEP))
    i0v = int(round(vmax / V_STEP))
    return float(v_prior[i0x, i0v])


def optimal_return(horizon=sparsedir.HORIZON):
    """Expected return of the Bayes-optimal policy from (x=0, v=0, prior)."""
    return _solve(horizon)
