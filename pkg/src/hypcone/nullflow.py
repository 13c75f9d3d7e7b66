"""Leaf dynamics of (u, v) along the relative nullity.

Along a unit-speed nullity leaf the pair obeys

    v' = v^2 - u^2 - 1,    u' = 2 u v,

which in w = v + i u reads w' = w^2 - 1.  The closed form
w(t) = (w0 - tanh t) / (1 - w0 tanh t) serves as an exact oracle for a
classical RK4 integration of the real system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PoleError
from .report import CheckResult, write_csv_table

POLE_TOL = 1e-12


@dataclass(frozen=True)
class FlowState:
    """(u, v) along a leaf with psi = tanh t and theta = u^2 + (v + psi)^2."""

    t: np.ndarray
    u: np.ndarray
    v: np.ndarray
    psi: np.ndarray
    theta: np.ndarray


def pole_time(w0: complex) -> float | None:
    """Leaf time of the blow-up, only for real |w0| > 1."""
    w0 = complex(w0)
    if abs(w0.imag) > 0 or abs(w0.real) <= 1.0:
        return None
    return float(np.arctanh(1.0 / w0.real))


def moebius_flow(w0: complex, t, pole_tol=POLE_TOL):
    """Closed-form (u, v) at leaf times t."""
    w0 = complex(w0)
    T = np.tanh(np.asarray(t, dtype=float))
    den = 1.0 - w0 * T
    if np.any(np.abs(den) < pole_tol):
        raise PoleError(f"trajectory of w0 = {w0} hits its pole", t_pole=pole_time(w0))
    w = (w0 - T) / den
    return w.imag, w.real


def _rhs(u, v):
    return 2.0 * u * v, v * v - u * u - 1.0


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    u: np.ndarray
    v: np.ndarray
    aborted: bool = False
    t_abort: float | None = None


def rk4_flow(w0: complex, t_end: float, step: float, blowup=1e8) -> Trajectory:
    """Classical RK4 from t = 0 to t_end (either sign).

    Stops with the last finite state once |w| exceeds ``blowup``.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    w0 = complex(w0)
    n = max(1, int(round(abs(t_end) / step)))
    h = t_end / n
    ts = [0.0]
    us = [w0.imag]
    vs = [w0.real]
    u, v = w0.imag, w0.real
    for k in range(n):
        k1 = _rhs(u, v)
        k2 = _rhs(u + 0.5 * h * k1[0], v + 0.5 * h * k1[1])
        k3 = _rhs(u + 0.5 * h * k2[0], v + 0.5 * h * k2[1])
        k4 = _rhs(u + h * k3[0], v + h * k3[1])
        u_new = u + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        v_new = v + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        if not (np.isfinite(u_new) and np.isfinite(v_new)) or np.hypot(u_new, v_new) > blowup:
            return Trajectory(np.array(ts), np.array(us), np.array(vs), True, ts[-1])
        u, v = u_new, v_new
        ts.append((k + 1) * h)
        us.append(u)
        vs.append(v)
    return Trajectory(np.array(ts), np.array(us), np.array(vs))


def rk4_trajectory(w0: complex, t_lo: float, t_hi: float, step: float) -> Trajectory:
    """Integrate outwards from t = 0 to both ends and join, ordered by t."""
    fwd = rk4_flow(w0, t_hi, step)
    bwd = rk4_flow(w0, t_lo, step)
    t = np.concatenate([bwd.t[::-1], fwd.t[1:]])
    u = np.concatenate([bwd.u[::-1], fwd.u[1:]])
    v = np.concatenate([bwd.v[::-1], fwd.v[1:]])
    aborted = fwd.aborted or bwd.aborted
    t_abort = fwd.t_abort if fwd.aborted else bwd.t_abort
    return Trajectory(t, u, v, aborted, t_abort)


def psi_radical(u, v):
    """psi recovered from (u, v): -2v / (1 + u^2 + v^2 + sqrt((1 + u^2 + v^2)^2 - 4 v^2))."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    q = 1.0 + u * u + v * v
    return -2.0 * v / (q + np.sqrt(q * q - 4.0 * v * v))


def psi_theta(t, u, v):
    """psi = tanh t (flow launched from v = 0 at t = 0) and theta = u^2 + (v + psi)^2."""
    psi = np.tanh(np.asarray(t, dtype=float))
    theta = np.asarray(u) ** 2 + (np.asarray(v) + psi) ** 2
    return psi, theta


def flow_states(u0: float, t) -> FlowState:
    t = np.asarray(t, dtype=float)
    u, v = moebius_flow(1j * u0, t)
    psi, theta = psi_theta(t, u, v)
    return FlowState(t, u, v, psi, theta)


def polynomial_inequality_identity(u, v):
    """8u^2v^2 + 2(v^2 - u^2 - 1)^2 - 2(u^2 + v^2 - 1)^2, identically 8u^2."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return 8 * u * u * v * v + 2 * (v * v - u * u - 1) ** 2 - 2 * (u * u + v * v - 1) ** 2


def _central(f, t, h):
    def c(step):
        return (f(t + step) - f(t - step)) / (2.0 * step)

    return (4.0 * c(h / 2.0) - c(h)) / 3.0


def check_flow_identities(u0: float, t_grid, tol=1e-6, fd_step=1e-4) -> list[CheckResult]:
    """psi identity in closed form; psi and theta derivative laws with central differences in t."""
    t = np.asarray(t_grid, dtype=float)
    s = flow_states(u0, t)
    r46 = np.abs(s.psi / (1 + s.psi**2) + s.v / (1 + s.u**2 + s.v**2))
    rad = np.abs(psi_radical(s.u, s.v) - s.psi)
    dpsi = _central(lambda tt: flow_states(u0, tt).psi, t, fd_step)
    r45 = np.abs(dpsi - (1 - s.psi**2))
    dtheta = _central(lambda tt: flow_states(u0, tt).theta, t, fd_step)
    r50 = np.abs(dtheta - 2 * (s.v - s.psi) * s.theta)
    tag = f"[u0={u0:g}]"
    return [
        CheckResult(f"flow.eq46_psi{tag}", "eq. (46): psi/(1+psi^2) = -v/(1+u^2+v^2)",
                    float(np.max(np.maximum(r46, rad))), tol, t.size, detail={"radical": float(np.max(rad))}),
        CheckResult(f"flow.eq45_psi_derivative{tag}", "eq. (45): e(psi) = 1 - psi^2", float(np.max(r45)), tol, t.size),
        CheckResult(f"flow.eq50_theta_derivative{tag}", "eq. (50): e(theta) = 2(v - psi) theta",
                    float(np.max(r50)), tol, t.size),
    ]


def check_rk4_vs_closed_form(w0: complex = 0.3j, t_range=(-3.0, 3.0), step=1e-3, tol=1e-8) -> CheckResult:
    traj = rk4_trajectory(w0, t_range[0], t_range[1], step)
    u, v = moebius_flow(w0, traj.t)
    err = float(np.max(np.hypot(traj.u - u, traj.v - v)))
    return CheckResult(f"flow.rk4_vs_moebius[w0={w0}]", "eq. (C2): e3(v) = v^2 - u^2 - 1, e3(u) = 2uv",
                       err, tol, traj.t.size)


def convergence_ratio(w0: complex = 0.3j, t_end=2.0, step=0.05) -> float:
    """Error ratio under step halving (about 16 for a fourth-order method)."""

    def err(h):
        tr = rk4_flow(w0, t_end, h)
        u, v = moebius_flow(w0, tr.t[-1])
        return float(np.hypot(tr.u[-1] - u, tr.v[-1] - v))

    return err(step) / err(step / 2)


def check_convergence_order(w0: complex = 0.3j, tol=1.5) -> CheckResult:
    ratio = convergence_ratio(w0)
    return CheckResult("flow.rk4_order", "eq. (C2) leaf ODE, RK4 order check (ratio ~ 16)",
                       abs(np.log2(ratio) - 4.0), tol, 2, detail={"ratio": ratio})


def check_semigroup(w0: complex = 0.5 + 0.4j, s=0.7, t_grid=None, tol=1e-12) -> CheckResult:
    t = np.linspace(-2, 2, 41) if t_grid is None else np.asarray(t_grid, dtype=float)
    us, vs = moebius_flow(w0, s)
    u1, v1 = moebius_flow(complex(vs, us), t)
    u2, v2 = moebius_flow(w0, s + t)
    err = float(np.max(np.hypot(u1 - u2, v1 - v2)))
    return CheckResult("flow.semigroup", "eq. (C2) flow: w(s + t) = flow(flow(w0, s), t)", err, tol, t.size)


def check_disk_invariance(rng, samples=200, t_grid=None, tol=1e-10) -> CheckResult:
    """|w| = 1 stays on the circle; |w| < 1 stays inside.

    Near the circle with tanh t close to 1 the denominator 1 - w0 tanh t is
    small, so roundoff grows to about 1e-12; the tolerance leaves room for it.
    """
    t = np.linspace(-5, 5, 101) if t_grid is None else np.asarray(t_grid, dtype=float)
    worst = 0.0
    for k in range(samples):
        ang = rng.uniform(0, 2 * np.pi)
        rad = 1.0 if k % 2 == 0 else rng.uniform(0, 0.99)
        w0 = rad * np.exp(1j * ang)
        u, v = moebius_flow(w0, t)
        mod = np.hypot(u, v)
        worst = max(worst, float(np.max(np.abs(mod - 1.0))) if rad == 1.0 else float(np.max(mod - 1.0)))
    return CheckResult("flow.disk_invariance", "v^2 + u^2 <= 1 preserved along leaves", max(worst, 0.0), tol, samples)


def check_monotone_and_limits(u0_values=(0.1, 0.3, 1.0), t_limit=10.0, tol=1e-8) -> list[CheckResult]:
    """v strictly decreasing for |w0| <= 1, u0 != 0; (u, v) -> (0, -+1) as t -> +-inf."""
    t = np.linspace(-6, 6, 601)
    worst_mono = -np.inf
    worst_lim = 0.0
    worst_cmp = -np.inf
    for u0 in u0_values:
        u, v = moebius_flow(1j * u0, t)
        worst_mono = max(worst_mono, float(np.max(np.diff(v))))
        dv = v * v - u * u - 1.0
        worst_cmp = max(worst_cmp, float(np.max(dv - (v * v - 1.0))))
        for sign in (1.0, -1.0):
            ul, vl = moebius_flow(1j * u0, sign * t_limit)
            worst_lim = max(worst_lim, abs(float(ul)), abs(float(vl) + sign))
    return [
        CheckResult("flow.v_strictly_decreasing", "proof: v along a leaf is strictly decreasing",
                    0.0 if worst_mono < 0 else 1.0 + worst_mono, tol, len(u0_values) * t.size,
                    detail={"max_increment": worst_mono}),
        CheckResult("flow.limits", "proof: sup v = 1 and inf v = -1 along leaves", worst_lim, tol, 2 * len(u0_values)),
        CheckResult("flow.comparison", "proof: e3(v) <= v^2 - 1", max(worst_cmp, 0.0), tol, len(u0_values) * t.size),
    ]


def check_theta_dichotomy(u0_values=(0.0, 0.2, 1.5), t_grid=None, tol=1e-12) -> CheckResult:
    """theta == 0 on cone trajectories (u0 = 0) and theta > 0 otherwise."""
    t = np.linspace(-4, 4, 161) if t_grid is None else np.asarray(t_grid, dtype=float)
    worst = 0.0
    for u0 in u0_values:
        s = flow_states(u0, t)
        if u0 == 0:
            worst = max(worst, float(np.max(np.abs(s.theta))))
        elif np.min(s.theta) <= 0:
            worst = max(worst, 1.0)
    return CheckResult("flow.theta_dichotomy", "proof: theta = u^2 + (v + psi)^2 vanishes only on cones",
                       worst, tol, len(u0_values) * t.size)


def check_polynomial_identity(rng, samples=1_000_000, tol=1e-9, bound=10.0) -> CheckResult:
    """difference - 8u^2 relative to the sum of absolute term sizes."""
    u = rng.uniform(-bound, bound, samples)
    v = rng.uniform(-bound, bound, samples)
    diff = polynomial_inequality_identity(u, v)
    scale = 8 * u * u * v * v + 2 * (v * v - u * u - 1) ** 2 + 2 * (u * u + v * v - 1) ** 2 + 8 * u * u
    rel = np.abs(diff - 8 * u * u) / scale
    return CheckResult("flow.polynomial_identity", "proof: Delta(u^2+v^2-1) >= 2(u^2+v^2-1)^2, gap 8u^2",
                       float(np.max(rel)), tol, samples)


@dataclass(frozen=True)
class FlowClassification:
    label: str
    t_pole: float | None
    trajectory: Trajectory


def classify_flow(u0: float, v0: float, t_range=(-3.0, 3.0), step=1e-3) -> FlowClassification:
    """Integrate the real system; label finite-time blow-up with the Moebius pole."""
    w0 = complex(v0, u0)
    traj = rk4_trajectory(w0, t_range[0], t_range[1], step)
    tp = pole_time(w0)
    if tp is not None and t_range[0] <= tp <= t_range[1]:
        return FlowClassification("blow-up in finite leaf time", tp, traj)
    if abs(w0) == 1.0 and u0 == 0.0:
        return FlowClassification("constant solution v = +-1", None, traj)
    return FlowClassification("bounded", None, traj)


def write_trajectory_csv(path, u0: float, t) -> None:
    """CSV columns t, u, v, psi, theta for a launch from w0 = i u0."""
    s = flow_states(u0, t)
    rows = zip(*(np.asarray(c, dtype=float).tolist() for c in (s.t, s.u, s.v, s.psi, s.theta)))
    write_csv_table(path, ("t", "u", "v", "psi", "theta"), rows)
