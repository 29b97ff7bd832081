"""Dense brute-force oracle for planar geometric constants.

Independent of the C++ search: evaluates the ratio objectives directly on a
dense (theta_x, theta_y, t) grid with numpy and its own norm code, then writes
the frozen values used by the C++ tests.

    python3 tests/oracles/dense_grid.py > tests/fixtures/oracle_values.json
"""
import json
import math
import sys

import numpy as np


def lp_norm(a, b, p):
    if math.isinf(p):
        return np.maximum(np.abs(a), np.abs(b))
    return (np.abs(a) ** p + np.abs(b) ** p) ** (1.0 / p)


def octagon_norm(a, b, _unused=None):
    # max over the functionals at angles k*pi/4, k = 0..3
    out = np.zeros_like(np.asarray(a, dtype=float))
    for k in range(4):
        out = np.maximum(out, np.abs(math.cos(k * math.pi / 4) * a + math.sin(k * math.pi / 4) * b))
    return out


def norm_fn(p_norm):
    if p_norm == "oct":
        return octagon_norm
    return lambda a, b: lp_norm(a, b, p_norm)


def unit_points(n, p):
    th = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    c, s = np.cos(th), np.sin(th)
    r = norm_fn(p)(c, s)
    return c / r, s / r


def cp_minus_inf(p_norm, lam, mu, p, n=720, nt=65):
    nrm = norm_fn(p_norm)
    ux, uy = unit_points(n, p_norm)
    best = 0.0
    for t in np.linspace(0.0, 1.0, nt):
        ax = lam * ux[:, None] + mu * t * ux[None, :]
        ay = lam * uy[:, None] + mu * t * uy[None, :]
        bx = mu * ux[:, None] - lam * t * ux[None, :]
        by = mu * uy[:, None] - lam * t * uy[None, :]
        m = np.minimum(nrm(ax, ay), nrm(bx, by)) ** p
        val = m.max() / (2.0 ** (p - 3) * (lam ** p + mu ** p) * (1 + t ** p))
        best = max(best, float(val))
    return best


def james(p_norm, n=1440):
    nrm = norm_fn(p_norm)
    ux, uy = unit_points(n, p_norm)
    sx = ux[:, None] + ux[None, :]
    sy = uy[:, None] + uy[None, :]
    dx = ux[:, None] - ux[None, :]
    dy = uy[:, None] - uy[None, :]
    return float(np.minimum(nrm(sx, sy), nrm(dx, dy)).max())


def bm_l1_l2(n_alpha=90, n_s=60, n_theta=720):
    # d(l1, l2) over T = R(a) diag(s, 1), using symmetry of l2 under rotation.
    best = float("inf")
    th = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
    c, s_ = np.cos(th), np.sin(th)
    r1 = lp_norm(c, s_, 1.0)
    u1 = (c / r1, s_ / r1)
    u2 = (c, s_)
    for a in np.linspace(0.0, math.pi / 2, n_alpha, endpoint=False):
        ca, sa = math.cos(a), math.sin(a)
        for s in np.linspace(1.0, 2.0, n_s):
            # T = diag(s,1) R(a): l1 -> l2
            x = ca * u1[0] - sa * u1[1]
            y = sa * u1[0] + ca * u1[1]
            t_norm = np.sqrt((s * x) ** 2 + y ** 2).max()
            # T^{-1} = R(-a) diag(1/s, 1): l2 -> l1
            x = u2[0] / s
            y = u2[1]
            ix = ca * x + sa * y
            iy = -sa * x + ca * y
            ti_norm = (np.abs(ix) + np.abs(iy)).max()
            best = min(best, float(t_norm * ti_norm))
    return best


def main():
    out = {
        "cp_minus_inf_l2_1_1_2": cp_minus_inf(2.0, 1.0, 1.0, 2.0),
        "cp_minus_inf_l1_1_1_2": cp_minus_inf(1.0, 1.0, 1.0, 2.0),
        "cp_minus_inf_linf_1_1_3": cp_minus_inf(math.inf, 1.0, 1.0, 3.0),
        "cp_minus_inf_l2_1_1_1p5": cp_minus_inf(2.0, 1.0, 1.0, 1.5),
        "cp_minus_inf_l2_2_1_2": cp_minus_inf(2.0, 2.0, 1.0, 2.0),
        "james_l2": james(2.0),
        "james_l1": james(1.0),
        "james_linf": james(math.inf),
        "cp_minus_inf_oct_1_1_2": cp_minus_inf("oct", 1.0, 1.0, 2.0),
        "james_oct": james("oct"),
        "bm_l1_l2": bm_l1_l2(),
    }
    json.dump(out, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
