"""Grass color scale setting: targets on the G0-G4 segment and level mapping.

The two end targets are the colors measured at the minimum and maximum green
length. Interior targets lie on the straight CIELAB segment between them,
placed so that CIEDE2000 distance from the first target grows in equal
steps. Each interior level is then assigned the measured length whose color
is closest to its target, provided it falls inside the color tolerance.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .colorcore import Ciede2000Params, LabColor, delta_e00, delta_e00_scalar
from .errors import BracketError, DegenerateSegmentError, NonMonotoneError, ValidationError
from .serialize import num

# CGATS TR 016 tolerance classes on CIEDE2000
TOLERANCE_COLOR_CRITICAL = 3.0
TOLERANCE_MOST_CRITICAL = 2.0

BISECTION_FTOL = 1e-9
BISECTION_MAX_ITER = 200
NEAR_ZERO_FACTOR = 1e-6


@dataclass(frozen=True)
class ScaleSpec:
    n_levels: int = 5
    tolerance: float = TOLERANCE_COLOR_CRITICAL
    min_span: float = 12.0
    params: Ciede2000Params = field(default_factory=Ciede2000Params)

    def __post_init__(self):
        if int(self.n_levels) != self.n_levels or self.n_levels < 2:
            raise ValidationError(f"n_levels must be an integer >= 2, got {self.n_levels!r}")
        if not self.tolerance > 0:
            raise ValidationError(f"tolerance must be positive, got {self.tolerance!r}")
        if not self.min_span >= 0:
            raise ValidationError(f"min_span must be nonnegative, got {self.min_span!r}")

    @property
    def top(self):
        return self.n_levels - 1


@dataclass(frozen=True)
class SpanCheck:
    passed: bool
    span: float
    min_span: float

    def to_dict(self):
        return {"passed": self.passed, "span": num(self.span), "min_span": num(self.min_span)}


@dataclass(frozen=True)
class MonotonicityReport:
    is_monotone: bool
    min_derivative: float
    argmin_t: float
    grid_step: float
    near_zero: bool = False

    def to_dict(self):
        return {
            "is_monotone": self.is_monotone,
            "min_derivative": num(self.min_derivative),
            "argmin_t": num(self.argmin_t),
            "grid_step": num(self.grid_step),
            "near_zero": self.near_zero,
        }


@dataclass(frozen=True)
class TargetSet:
    g: tuple
    t: tuple
    total_span: float
    iterations: tuple = ()

    def min_separation(self, params=None):
        """Smallest CIEDE2000 distance between any two targets.

        Equal steps from G_0 do not imply equal (or tolerance-exceeding)
        steps between other pairs, since CIEDE2000 is not additive along a
        line; check this against the tolerance when it matters.
        """
        labs = np.array([tuple(g) for g in self.g])
        i, j = np.triu_indices(len(labs), k=1)
        return float(np.min(delta_e00(labs[i], labs[j], params)))

    def to_dict(self):
        return {
            "total_span": num(self.total_span),
            "min_separation": num(self.min_separation()),
            "levels": [
                {"level": n, "t": num(t), "lab": [num(v) for v in g]}
                for n, (g, t) in enumerate(zip(self.g, self.t))
            ],
        }


@dataclass(frozen=True)
class LevelMatch:
    level: int
    target: LabColor
    candidates: tuple
    chosen_length_mm: float = None
    min_delta_e00: float = None
    anchored: bool = False

    def to_dict(self):
        return {
            "level": self.level,
            "target": None if self.target is None else [num(v) for v in self.target],
            "anchored": self.anchored,
            "candidates_mm": [num(v) for v in self.candidates],
            "n_candidates": len(self.candidates),
            "chosen_length_mm": num(self.chosen_length_mm),
            "min_delta_e00": num(self.min_delta_e00),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            level=int(d["level"]),
            target=LabColor.from_array(d["target"]) if d.get("target") else None,
            candidates=tuple(d.get("candidates_mm", ())),
            chosen_length_mm=d.get("chosen_length_mm"),
            min_delta_e00=d.get("min_delta_e00"),
            anchored=bool(d.get("anchored", False)),
        )


@dataclass(frozen=True)
class ScaleMapping:
    levels: tuple
    feasible: bool
    reason: str = None
    tolerance: float = TOLERANCE_COLOR_CRITICAL

    @property
    def n_levels(self):
        return len(self.levels)

    @property
    def chosen_lengths(self):
        return tuple(m.chosen_length_mm for m in self.levels)

    @property
    def min_delta_e00(self):
        return tuple(m.min_delta_e00 for m in self.levels)

    def to_dict(self):
        return {
            "feasible": self.feasible,
            "reason": self.reason,
            "tolerance": num(self.tolerance),
            "n_levels": self.n_levels,
            "chosen_lengths_mm": [num(v) for v in self.chosen_lengths],
            "levels": [m.to_dict() for m in self.levels],
        }

    @classmethod
    def from_dict(cls, d):
        """Accept a mapping dict or a full procedure report holding one."""
        if "mapping" in d:
            d = d["mapping"]
            if d is None:
                raise ValidationError("report contains no mapping (procedure stopped at an earlier gate)")
        try:
            levels = tuple(LevelMatch.from_dict(x) for x in d["levels"])
            return cls(levels, bool(d["feasible"]), d.get("reason"), float(d.get("tolerance", TOLERANCE_COLOR_CRITICAL)))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed scale mapping: {exc}") from exc

    @classmethod
    def from_lengths(cls, lengths, tolerance=TOLERANCE_COLOR_CRITICAL):
        """A feasible mapping that simply assigns the given length to each level."""
        levels = tuple(
            LevelMatch(n, None, (float(x),), float(x), 0.0, anchored=n in (0, len(lengths) - 1))
            for n, x in enumerate(lengths)
        )
        return cls(levels, True, None, tolerance)


@dataclass(frozen=True)
class ProcedureReport:
    span_check: SpanCheck
    monotonicity: MonotonicityReport = None
    targets: TargetSet = None
    mapping: ScaleMapping = None
    failed_stage: str = None
    reason: str = None
    camera_position: tuple = None

    @property
    def feasible(self):
        return self.failed_stage is None

    def to_dict(self):
        return {
            "camera_position": list(self.camera_position) if self.camera_position else None,
            "feasible": self.feasible,
            "failed_stage": self.failed_stage,
            "reason": self.reason,
            "span_check": self.span_check.to_dict(),
            "monotonicity": self.monotonicity.to_dict() if self.monotonicity else None,
            "targets": self.targets.to_dict() if self.targets else None,
            "mapping": self.mapping.to_dict() if self.mapping else None,
        }


def _lab_array(c):
    return np.asarray(c, dtype=float).reshape(3)


def segment_point(g0, g4, t):
    """Point at parameter ``t`` in [0, 1] on the straight Lab segment g0 -> g4."""
    if not (0.0 <= t <= 1.0):
        raise ValidationError(f"segment parameter t={t!r} outside [0, 1]")
    p0, p1 = _lab_array(g0), _lab_array(g4)
    return LabColor.from_array(t * (p1 - p0) + p0)


def _segment_points(g0, g4, ts):
    p0, p1 = _lab_array(g0), _lab_array(g4)
    ts = np.asarray(ts, dtype=float)[..., None]
    return ts * (p1 - p0) + p0


def span_profile(g0, g4, ts, params=None):
    """CIEDE2000 distance from ``g0`` to the segment points at ``ts``."""
    return delta_e00(_lab_array(g0), _segment_points(g0, g4, ts), params)


def check_span(g0, g4, spec=None):
    """Span gate: CIEDE2000(g0, g4) must be strictly above ``spec.min_span``."""
    spec = spec or ScaleSpec()
    span = delta_e00(g0, g4, spec.params)
    return SpanCheck(bool(span > spec.min_span), float(span), float(spec.min_span))


def check_monotone(g0, g4, params=None, grid_step=1e-3):
    """Estimate the sign of d/dt CIEDE2000(g0, P(t)) on a uniform grid.

    Central differences inside the grid, one-sided at t=0 and t=1. The grid
    step is rounded down so that it divides [0, 1] exactly.
    """
    if not (0.0 < grid_step <= 0.01):
        raise ValidationError(f"grid_step must lie in (0, 0.01], got {grid_step!r}")
    if np.array_equal(_lab_array(g0), _lab_array(g4)):
        raise DegenerateSegmentError("segment endpoints coincide")
    n = int(math.ceil(1.0 / grid_step - 1e-9))
    step = 1.0 / n
    ts = np.linspace(0.0, 1.0, n + 1)
    e = span_profile(g0, g4, ts, params)
    deriv = np.empty_like(e)
    deriv[1:-1] = (e[2:] - e[:-2]) / (2.0 * step)
    deriv[0] = (e[1] - e[0]) / step
    deriv[-1] = (e[-1] - e[-2]) / step
    k = int(np.argmin(deriv))
    min_d = float(deriv[k])
    return MonotonicityReport(
        is_monotone=min_d > 0.0,
        min_derivative=min_d,
        argmin_t=float(ts[k]),
        grid_step=step,
        near_zero=min_d < NEAR_ZERO_FACTOR * float(e[-1]),
    )


def _bisect(f, lo, hi, ftol=BISECTION_FTOL, max_iter=BISECTION_MAX_ITER):
    """Root of increasing ``f`` on [lo, hi]; returns (t, iterations)."""
    f_lo, f_hi = f(lo), f(hi)
    if f_lo > 0 or f_hi < 0:
        raise BracketError(f"root not bracketed: f({lo})={f_lo}, f({hi})={f_hi}")
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if abs(f_mid) <= ftol:
            return mid, it
        if mid in (lo, hi):
            break
        if f_mid < 0:
            lo = mid
        else:
            hi = mid
    raise BracketError(f"bisection did not reach |f| <= {ftol} within {max_iter} iterations")


def compute_targets(g0, g4, spec=None, monotonicity=None):
    """Target colors G_0..G_{n-1} at equal CIEDE2000 increments from ``g0``.

    Refuses with :class:`NonMonotoneError` unless the distance profile is
    strictly increasing; ``monotonicity`` may pass a precomputed report.
    """
    spec = spec or ScaleSpec()
    g0 = LabColor.from_array(g0)
    g4 = LabColor.from_array(g4)
    if monotonicity is None:
        monotonicity = check_monotone(g0, g4, spec.params)
    if not monotonicity.is_monotone:
        raise NonMonotoneError(
            f"distance profile is not increasing: min derivative {monotonicity.min_derivative:.6g} "
            f"at t={monotonicity.argmin_t:.6g}",
            monotonicity,
        )
    span = delta_e00_scalar(g0, g4, spec.params)
    if not span > 0:
        raise DegenerateSegmentError("total span is zero")
    p0, p1 = _lab_array(g0), _lab_array(g4)
    dp = p1 - p0

    gs, ts, iters = [g0], [0.0], [0]
    for n in range(1, spec.top):
        goal = n / spec.top * span
        t, it = _bisect(lambda t: delta_e00_scalar(p0, p0 + t * dp, spec.params) - goal, 0.0, 1.0)
        gs.append(LabColor.from_array(p0 + t * dp))
        ts.append(t)
        iters.append(it)
    gs.append(g4)
    ts.append(1.0)
    iters.append(0)
    return TargetSet(tuple(gs), tuple(ts), span, tuple(iters))


def _prepare_samples(samples):
    if len(samples) < 2:
        raise ValidationError(f"need at least 2 samples, got {len(samples)}")
    positions = {s.camera_position for s in samples}
    if len(positions) > 1:
        raise ValidationError(f"samples mix camera positions: {sorted(positions)}")
    return sorted(samples, key=lambda s: (s.green_length_mm, s.repetition))


def _anchor(level, sample):
    return LevelMatch(level, sample.lab, (sample.green_length_mm,), sample.green_length_mm, 0.0, anchored=True)


def map_lengths(samples, spec=None, targets=None):
    """Assign a measured green length to each level of the color scale.

    Levels 0 and top are anchored to the shortest and longest samples.
    Interior level n takes the sample minimizing CIEDE2000 to G_n (ties go
    to the shorter length), provided that minimum is within tolerance.
    """
    spec = spec or ScaleSpec()
    ordered = _prepare_samples(samples)
    first, last = ordered[0], ordered[-1]
    span = check_span(first.lab, last.lab, spec)
    if not span.passed:
        return ScaleMapping(
            (_anchor(0, first), _anchor(spec.top, last)),
            feasible=False,
            reason=f"span {span.span:.4f} is not above {span.min_span:g}",
            tolerance=spec.tolerance,
        )
    if targets is None:
        targets = compute_targets(first.lab, last.lab, spec)

    lengths = np.array([s.green_length_mm for s in ordered])
    labs = np.array([tuple(s.lab) for s in ordered])
    levels = [_anchor(0, first)]
    missing = []
    for n in range(1, spec.top):
        d = np.atleast_1d(delta_e00(_lab_array(targets.g[n]), labs, spec.params))
        k = int(np.argmin(d))
        best = float(d[k])
        ok = best <= spec.tolerance
        levels.append(
            LevelMatch(
                n,
                targets.g[n],
                tuple(float(x) for x in lengths[d <= spec.tolerance]),
                float(lengths[k]) if ok else None,
                best,
            )
        )
        if not ok:
            missing.append(f"level {n} (min dE00 {best:.4f})")
    levels.append(_anchor(spec.top, last))
    reason = None
    if missing:
        reason = f"no sample within tolerance {spec.tolerance:g} for " + ", ".join(missing)
    return ScaleMapping(tuple(levels), not missing, reason, spec.tolerance)


def run_procedure(samples, spec=None, grid_step=1e-3):
    """Span gate, monotonicity, targets and mapping, stopping at the first failure."""
    spec = spec or ScaleSpec()
    ordered = _prepare_samples(samples)
    first, last = ordered[0], ordered[-1]
    position = first.camera_position

    span = check_span(first.lab, last.lab, spec)
    if not span.passed:
        return ProcedureReport(
            span, failed_stage="span", camera_position=position,
            reason=f"span {span.span:.4f} is not above {span.min_span:g}",
        )
    try:
        mono = check_monotone(first.lab, last.lab, spec.params, grid_step)
    except DegenerateSegmentError as exc:
        return ProcedureReport(span, failed_stage="monotonicity", reason=str(exc), camera_position=position)
    if not mono.is_monotone:
        return ProcedureReport(
            span, mono, failed_stage="monotonicity", camera_position=position,
            reason=f"min derivative {mono.min_derivative:.6g} at t={mono.argmin_t:.6g}",
        )
    targets = compute_targets(first.lab, last.lab, spec, mono)
    mapping = map_lengths(ordered, spec, targets)
    if not mapping.feasible:
        return ProcedureReport(span, mono, targets, mapping, "mapping", mapping.reason, position)
    return ProcedureReport(span, mono, targets, mapping, camera_position=position)
