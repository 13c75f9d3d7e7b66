# %% [markdown]
# # The Gauss map into the fourth exterior power
#
# gamma = f ^ e1 ^ e2 ^ e3 is a unit timelike simple 4-vector.  Its
# differential is spanned by normal-replacement wedges and its Laplacian is
# -|alpha|^2 gamma plus a mixed term that only appears in codimension 2.

# %%
from hypcone.cone import cone, cone_map, grid
from hypcone.gaussmap import (
    check_energy,
    check_gauss_differential,
    check_gauss_laplacian,
    check_gauss_norm,
    check_mixed_ablation,
)
from hypcone.splitting import cone_frame_field

spec = cone("helicoid", "equidistant", n=4, d=0.7, t_range=(-2.0, 2.0))
G, F = cone_map(spec), cone_frame_field(spec)
x = grid(spec, 4)
for check in (check_gauss_norm, check_gauss_differential, check_energy, check_gauss_laplacian):
    print(check(G, F, x))

# %% [markdown]
# Codimension 2: a holomorphic curve in a horosphere of H^5.  Dropping the
# mixed term leaves a large residual.

# %%
holo = cone("holomorphic_curve", "horosphere", n=5, t_range=(-1.0, 1.0))
Gh, Fh = cone_map(holo), cone_frame_field(holo)
y = grid(holo, 4)
res = check_mixed_ablation(Gh, Fh, y)
print(res)
print("residual ratio without / with mixed term:", res.detail["ratio"])
