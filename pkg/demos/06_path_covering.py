# How well does d_eps track the geodesic distance?  For pairs of points on
# the circle, compare d_eps between their nearest samples with d_L.

from georecon import circle, path_covering_check, sample_shape

spec = circle()
sample = sample_shape(spec, 200)
for seed in range(6):
    rep = path_covering_check(spec, sample.cloud, 0.1, trials=500, seed=seed, dh_bound=sample.dh_bound)
    print(f"seed {seed}: worst d_eps/d_L = {rep.worst_ratio:.3f}, violations of < 3 d_L: {rep.violations}")

# For very close pairs the nearest samples can still be one hop apart, so
# the ratio has no bound.  With the last hop allowed up to eps it holds:
rep = path_covering_check(spec, sample.cloud, 0.1, trials=500, seed=4, dh_bound=sample.dh_bound, slack=1.0)
print("d_eps < 3 d_L + eps: violations", rep.violations)
