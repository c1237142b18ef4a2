"""Reproduce the bounded-degree and lattice radius tables.

For a homogeneous activity the criterion rho <= mu / phi(mu) gives a radius
R = sup_mu mu / phi(mu). Each criterion supplies its own phi, and sharper
criteria give larger radii.
"""

import math

from clusterexp import (bounded_degree_radius, build_family_graph, central_polymer,
                        domino_family, homogeneous_radius, model_phi, neighborhood_polynomial,
                        parse_model, scott_sokal_reference)

delta = 6
print(f"graphs of maximum degree {delta}")
for kind, closed in (("kp", 1 / (7 * math.e)), ("dob", 6 ** 6 / 7 ** 7),
                     ("impdob", 3125 / 49781)):
    r = bounded_degree_radius(kind, delta)
    print(f"  {kind:7s} R = {r.radius:.7f}   closed form {closed:.7f}   at mu = {r.maximizer:.5f}")
print(f"  {'shearer':7s} R = {scott_sokal_reference(delta):.7f}   (tree value, for reference)")

print("\ndominoes in Z^2: neighbourhood polynomial from a 5x5 window")
fam = domino_family(5, 5)
poly = neighborhood_polynomial(build_family_graph(fam), central_polymer(fam)).coefficients
r = homogeneous_radius(list(poly))
print(f"  phi = {list(poly)}  R = {r.radius:.9f}  (1/13 = {1 / 13:.9f})")

print("\ntriangular lattice sites (nearest-neighbour exclusion)")
enum = homogeneous_radius(model_phi(parse_model("tri:r1"), "fp"))
printed = homogeneous_radius([1, 7, 8, 2])
print(f"  enumerated phi 1+7m+9m^2+2m^3: R = {enum.radius:.7f}")
print(f"  tabulated  phi 1+7m+8m^2+2m^3: R = {printed.radius:.7f}")

print("\ncomplete graphs: R = 1/(D+1), a supremum that is never attained")
for n in (3, 5, 7):
    r = homogeneous_radius(model_phi(parse_model(f"complete:{n}"), "fp"))
    print(f"  K{n}: R = {r.radius:.6f}  attained = {r.attained}")
