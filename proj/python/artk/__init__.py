"""Part motion estimation toolkit: articulation, pose coding, metrics and baselines."""

from ._artk import (
    ArtkError,
    Mesh,
    animate,
    apply_motion,
    apply_motion_points,
    baseline,
    chamfer,
    connected_components,
    decode_pose,
    encode_pose,
    euler_to_rotation,
    evaluate,
    f_score,
    filter_small_parts,
    generate_dataset,
    geodesic_deg,
    infer_moved_parts,
    nearest,
    read_obj,
    rodrigues_rotate,
    sample_pointcloud,
    surface_area,
    write_obj,
)

__all__ = [name for name in dir() if not name.startswith("_")]
