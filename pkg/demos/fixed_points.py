"""Iterate T(mu) = rho * phi(mu) from mu = rho and watch it settle or blow up.

When the iteration converges its limit rho* bounds rho times the pinned
series for every polymer. Here we compare rho* with the exact series on a
small random gas, then push the activity past the radius of a triangle.
"""

import numpy as np

from clusterexp import FP, KP, build_graph, complete_graph, fixed_point, pi_volume

g = build_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)])
rho = np.full(5, 0.08)
for kind in (FP, KP):
    res = fixed_point(kind, g, rho)
    print(f"{kind.value}: converged={res.converged} after {res.iterations} steps")
    print("   rho* =", np.round(res.rho_star, 6))
exact = [rho[v] * pi_volume(g, None, v, rho) for v in range(5)]
print("exact rho*Pi =", np.round(exact, 6))

k3 = complete_graph(3)
print("\ntriangle, where the FP radius is 1/3:")
for r in (0.30, 0.33, 0.34):
    res = fixed_point(FP, k3, [r] * 3)
    state = "converged" if res.converged else ("diverged" if res.diverged else "stalled")
    print(f"  rho={r:.2f}: {state} in {res.iterations} steps")
