# %% [markdown]
# # The (u, v) leaf flow
#
# With w = v + i u the leaf system is w' = w^2 - 1, solved by the Moebius
# map w(t) = (w0 - tanh t) / (1 - w0 tanh t).  RK4 on the real system
# serves as the cross-check.

# %%
import numpy as np

from hypcone.nullflow import (
    classify_flow,
    convergence_ratio,
    flow_states,
    moebius_flow,
    polynomial_inequality_identity,
    rk4_flow,
)

tr = rk4_flow(0.3j, 3.0, 1e-3)
u, v = moebius_flow(0.3j, tr.t)
print("max RK4 error:", np.max(np.hypot(tr.u - u, tr.v - v)))
print("step-halving error ratio:", convergence_ratio())

# %% [markdown]
# For a launch from v = 0, psi = tanh t and theta = u^2 + (v + psi)^2
# vanishes only on cone trajectories (u0 = 0).

# %%
t = np.linspace(-3, 3, 7)
for u0 in (0.0, 0.5):
    s = flow_states(u0, t)
    print(f"u0 = {u0}: theta = {np.round(s.theta, 6)}")

# %% [markdown]
# The algebraic gap in the subharmonicity estimate is exactly 8 u^2.

# %%
rng = np.random.default_rng(0)
uu, vv = rng.uniform(-10, 10, (2, 5))
print(polynomial_inequality_identity(uu, vv) - 8 * uu**2)

# %% [markdown]
# Real initial data beyond the unit disk blow up at t = arctanh(1 / v0).

# %%
print(classify_flow(0.0, 1.5).label, classify_flow(0.0, 1.5).t_pole)
