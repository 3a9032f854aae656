"""Homotopy-type and geometric reconstruction of shapes from noisy samples."""

from .complex import (
    Filtration,
    SimplicialComplex,
    cech_complex,
    cech_filtration,
    intrinsic_cech_on_shape,
    intrinsic_rips_on_shape,
    rips_complex,
    rips_filtration,
    simplicial_map_defects,
)
from .geometry import NoiseModel, PointCloud, euclidean_distance, hausdorff_distance, nearest_sample_point
from .homology import (
    PersistenceDiagram,
    betti,
    compute_persistence,
    image_rank_oracle,
    persistent_betti,
    reconstruct_homology,
    theorem_scales,
)
from .intrinsic import build_eps_graph, d_eps_metric, intrinsic_rips, path_covering_check
from .miniball import minimal_enclosing_ball
from .reconstruct import ShadowComplex, export_svg, reconstruct_graph, run_reconstruction, shadow_betti, shadow_hausdorff
from .shapes import (
    ShapeSpec,
    builtin,
    check_sampling,
    circle,
    crossing_betti1,
    embedded_graph,
    figure_eight,
    geodesic_distance,
    lemniscate,
    lissajous,
    sample_off_nodes,
    sample_shape,
    square,
    theta,
    verify_sampling_condition,
)

__version__ = "0.1.0"
