"""Camera/lens, stereo-baseline and mounting design for moving outdoor vision
rigs, plus saturation/glare auditing of the captured images."""

__version__ = "0.1.0"

from .errors import (CatalogError, ConfigError, DesignValidationError, DomainError,  # noqa: E402
                     ImageFormatError, InfeasibleError, InputError, RigDesignError)
from .optics import (CameraSpec, FocusEnvelope, LensSpec, TargetSpec, angular_fov,  # noqa: E402
                     circle_of_confusion, dof_limits, focus_envelope, fov_at_distance,
                     fov_from_resolution, hyperfocal, pixels_on_target, required_resolution,
                     view_at, working_distance)
from .stereo import (StereoConstraints, StereoLayout, baseline_max_disparity,  # noqa: E402
                     baseline_max_overlap, baseline_min_for_depth_error, depth_error,
                     focal_length_pixels, solve_baseline)
from .selector import (DesignConstraints, PlacementGeometry, RigEvaluation, Selection,  # noqa: E402
                       evaluate_candidate, placement_geometry, select_rig)
from .coverage import (MotionProfile, frames_per_target, max_processing_time,  # noqa: E402
                       required_fov_v)
from .exposure import (Category, DatasetReport, SaturationPolicy, audit_dataset,  # noqa: E402
                       classify, saturation_rate)
