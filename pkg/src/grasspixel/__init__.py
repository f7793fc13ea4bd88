"""Color scale calibration and keyframe animation for grass-length pixels."""

from .colorcore import (
    Ciede2000Params,
    LabColor,
    SrgbColor,
    XyzColor,
    delta_e00,
    delta_e76,
    lab_to_srgb,
    srgb_to_lab,
)
from .calibration import (
    CheckerPatchSet,
    CorrectionMatrix,
    EvaluationRegion,
    MeasuredSample,
    apply_correction,
    fit_correction,
    measure_patch,
)
from .scalefit import (
    ScaleSpec,
    check_monotone,
    check_span,
    compute_targets,
    map_lengths,
    run_procedure,
    segment_point,
)
from .repeatability import analyze_repeats
from .display import (
    AnimationScript,
    MixModel,
    MotorSpec,
    PixelGeometry,
    compile_script,
    length_to_steps,
    level_to_length,
    load_bundled_script,
    render_animation,
    render_frame,
)

__version__ = "0.1.0"
