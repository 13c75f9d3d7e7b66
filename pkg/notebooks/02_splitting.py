# %% [markdown]
# # Splitting tensor and the leaf dynamics on a cone
#
# With e3 = d/dt spanning the nullity, C_{e3} restricted to the conullity
# is v I - u J.  On cones u vanishes and v = (|H| - tanh t) / (1 - |H| tanh t).

# %%
import numpy as np

from hypcone.cone import cone, cone_map
from hypcone.splitting import check_C2_leaf, cone_frame_field, growth_exponent, splitting_tensor

spec = cone("helicoid", "equidistant", n=4, d=0.7, t_range=(-3.0, 3.0))
G, F = cone_map(spec), cone_frame_field(spec)
t = np.linspace(-2, 2, 9)
x = np.stack([np.full_like(t, 0.3), np.full_like(t, 0.2), t])
sd = splitting_tensor(G, F, x)
H = np.tanh(0.7)
for tk, v, u in zip(t, sd.v, sd.u):
    print(f"t = {tk:+.1f}  v = {v:+.10f}  closed form {(H - np.tanh(tk)) / (1 - H * np.tanh(tk)):+.10f}  u = {u:.1e}")

# %% [markdown]
# The leaf equations e3(v) = v^2 - u^2 - 1 and e3(u) = 2uv hold along fibers.

# %%
print(check_C2_leaf(G, F, x))

# %% [markdown]
# On a horosphere cone r = e^{-t}, so |alpha|^2 grows like e^{2t}.

# %%
horo = cone("helicoid", "horosphere", n=4)
slope, _ = growth_exponent(cone_map(horo), cone_frame_field(horo), np.array([0.4, 0.3, 0.0]), np.linspace(-1.8, 1.8, 19))
print("measured exponent:", slope)
