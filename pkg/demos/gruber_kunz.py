"""Subset polymers: the Gruber-Kunz site condition against the graph criteria.

Polymers are finite sets of sites; two overlap when they share a site. With
weights a(gamma) the site condition asks that the total weighted activity
touching any one site stays below e^{a} - 1. It can succeed where
Kotecky-Preiss fails.
"""

import numpy as np

from clusterexp import (SubsetPolymerFamily, domino_family, gruber_kunz_condition,
                        subset_criteria_table3)

single = SubsetPolymerFamily(("x",), (frozenset({"x"}),))
print("one polymer on one site, a = 0.15")
for r in (0.10, 0.13, 0.17):
    print(f"  rho={r:.2f}:", subset_criteria_table3(single, [r], 0.15))

fam = domino_family(3, 3)
print(f"\ndominoes in a 3x3 window: {len(fam.polymers)} polymers")
for r in (0.02, 0.05, 0.08):
    rep = gruber_kunz_condition(fam, np.full(len(fam.polymers), r), a=0.3)
    print(f"  rho={r:.2f}: holds={rep.holds}  margin={rep.margin:+.4f}")
