# Homology of a circle from a finite sample, via the Rips filtration.
#
# A single Rips complex only sees one scale.  The persistent Betti number
# at the scale pair (eps, (3 delta + 1) eps / 2) is what recovers the circle.

import numpy as np

from georecon import circle, reconstruct_homology, sample_shape
from georecon.complex import rips_complex
from georecon.homology import betti_numbers

spec = circle()
sample = sample_shape(spec, 120)
print("sample of", len(sample.cloud), "points, certified dH <=", round(sample.dh_bound, 5))

# the complex at a few single scales
D = sample.cloud.distance_matrix()
for alpha in (0.03, 0.06, 0.5, 2.1):
    K = rips_complex(D, alpha, 2)
    print(f"Ri_{alpha}: betti {betti_numbers(K)}")

eps = 0.25
rec = reconstruct_homology(sample.cloud, eps, spec.distortion, spec.convexity_radius, sample.dh_bound)
print(rec.check.report())
print("scales", (eps, round(rec.target, 4)), "persistent betti", rec.betti)

# the bars behind those numbers
long_bars = [iv for iv in rec.diagram.intervals if iv.death - iv.birth > eps]
for iv in long_bars:
    print(" long bar: dim", iv.dim, "born", round(iv.birth, 4), "dies", iv.death if np.isinf(iv.death) else round(iv.death, 4))
