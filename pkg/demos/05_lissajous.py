# A Lissajous curve x = cos 3t, y = sin 2t crosses itself 7 times, so as a
# graph it has beta_1 = 8.  The sample is dense (2400 points) because the
# shortest loop is short and the distortion bound is large.  Takes about a minute.

import time

from georecon import crossing_betti1, lissajous, run_reconstruction, sample_shape
from georecon.geometry import NoiseModel

spec = lissajous(3, 2)
print("distortion bound", spec.distortion, "shortest cycle", round(spec.shortest_cycle, 4))
print("crossing oracle: beta1 =", crossing_betti1(spec.curve))

sample = sample_shape(spec, 2400, NoiseModel(0.0002, seed=0))
t0 = time.perf_counter()
shadow, rep = run_reconstruction(sample.cloud, 0.0105, spec.distortion, spec, sample.dh_bound)
print(rep.check.report())
print("betti", (rep.beta0, rep.beta1), f"in {time.perf_counter() - t0:.1f} s")
print(f"Hausdorff {rep.hausdorff_estimate:.4f} < {rep.hausdorff_bound:.4f}")
