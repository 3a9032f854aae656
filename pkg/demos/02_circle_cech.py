# Same circle, Cech filtration.  Balls are open, so the Cech complex at
# radius alpha keeps a simplex only if its smallest enclosing ball has
# radius strictly below alpha.

from georecon import circle, reconstruct_homology, sample_shape
from georecon.homology import theorem_scales

spec = circle()
eps = 0.06
s, t = theorem_scales("cech", eps, spec.distortion)
print(f"query pair ({s}, {t:.4f})")

for n in (40, 80):
    sample = sample_shape(spec, n)
    try:
        rec = reconstruct_homology(sample.cloud, eps, spec.distortion, spec.convexity_radius,
                                   sample.dh_bound, method="cech")
    except ValueError as e:
        # too sparse: the validator stops before any complex is built
        print(n, "points:", e)
        continue
    print(n, "points: dH", round(sample.dh_bound, 4), "betti", rec.betti)
