# %% [markdown]
# # Boundary cases: horospheres and geodesic spheres
#
# |H| = 1 (horosphere) still gives an immersion but the scalar curvature is
# unbounded; |H| > 1 (geodesic sphere) degenerates where tanh t = 1/|H|.

# %%
import numpy as np

from hypcone.cone import cone, immersion_criterion, scan_degeneracy
from hypcone.suites import scalar_curvature_sweep

horo = cone("helicoid", "horosphere", n=4)
slope, t, s = scalar_curvature_sweep(horo, np.linspace(-3, 3, 61))
print("slope of log|s + 6| against t:", slope)

# %%
sphere = cone("helicoid", "geodesic_sphere", n=4, rho=1.0)
print(immersion_criterion(sphere).label)
scan = scan_degeneracy(sphere, (0.5, 0.3), samples=600)
print("numerical rank loss at t =", scan.t_min, "eigenvalue ratio", scan.ratio_min)
for kind in ("equidistant", "horosphere"):
    print(kind, immersion_criterion(cone("helicoid", kind)).label)
