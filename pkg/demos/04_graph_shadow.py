# Geometric reconstruction of a planar graph.  The shadow keeps every
# segment and triangle of samples that are pairwise close in the d_eps
# metric; its union is a thickened copy of the graph.

import sys

from georecon import figure_eight, run_reconstruction, sample_shape
from georecon.geometry import NoiseModel
from georecon.reconstruct import export_svg

spec = figure_eight()
eps = 0.045
sample = sample_shape(spec, 340, NoiseModel(0.0005, seed=0))
shadow, rep = run_reconstruction(sample.cloud, eps, spec.distortion, spec, sample.dh_bound)

print(rep.check.report())
print("cells:", rep.n_points, "vertices,", rep.n_segments, "segments,", rep.n_triangles, "triangles")
print("betti", (rep.beta0, rep.beta1), "expected", spec.betti())
print(f"Hausdorff(shadow, G) = {rep.hausdorff_estimate:.4f} +- {rep.resolution:.4f}, bound {rep.hausdorff_bound:.4f}")

out = sys.argv[1] if len(sys.argv) > 1 else "figure_eight_shadow.svg"
export_svg(shadow, spec, out)
print("wrote", out)
