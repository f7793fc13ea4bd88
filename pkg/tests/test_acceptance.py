"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -s`` (or plain
``python3 tests/test_acceptance.py``) to see the summary lines.
"""

import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from grasspixel.calibration import MeasuredSample
from grasspixel.colorcore import delta_e00
from grasspixel.display import BUNDLED_SCRIPTS, MixModel, compile_script, length_to_steps, load_bundled_script, render_animation
from grasspixel.repeatability import analyze_repeats
from grasspixel.scalefit import BISECTION_MAX_ITER, ScaleMapping, check_monotone, check_span, compute_targets, run_procedure

import fixtures as fx
from oracles import forward_difference_sign
from sharma_data import SHARMA_PAIRS

HERE = Path(__file__).resolve().parent
SUITE_BUDGET_S = 60.0


def report(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    # show the line even when pytest captures output
    capman = report.capman
    if capman is not None:
        with capman.global_and_fixture_disabled():
            print(line)
    else:
        print(line)
    assert ok, line


report.capman = None


@pytest.fixture(autouse=True)
def _uncaptured(request):
    report.capman = request.config.pluginmanager.getplugin("capturemanager")
    yield
    report.capman = None


def test_01_sharma_dataset():
    data = np.array(SHARMA_PAIRS)
    t0 = time.perf_counter()
    got = delta_e00(data[:, :3], data[:, 3:6])
    per_pair = [delta_e00(r[:3], r[3:6]) for r in SHARMA_PAIRS]
    elapsed = time.perf_counter() - t0
    err = max(np.max(np.abs(got - data[:, 6])), np.max(np.abs(np.array(per_pair) - data[:, 6])))
    report(1, err <= 1e-4 and elapsed < 1.0, f"{len(data)} pairs, max |err| {err:.2e}, {elapsed * 1e3:.1f} ms")


def test_02_random_pair_axioms():
    rng = np.random.default_rng(2024)
    n = 10_000
    lo, hi = [0, -128, -128], [100, 128, 128]
    p = rng.uniform(lo, hi, size=(n, 3))
    q = rng.uniform(lo, hi, size=(n, 3))
    d_pq, d_qp, d_pp = delta_e00(p, q), delta_e00(q, p), delta_e00(p, p)
    bad = int(np.sum(d_pq < 0) + np.sum(np.abs(d_pq - d_qp) > 1e-9) + np.sum(d_pp > 1e-12))
    report(2, bad == 0, f"{n} pairs, {bad} violations (max asym {np.max(np.abs(d_pq - d_qp)):.1e})")


def test_03_target_spacing():
    rng = np.random.default_rng(77)
    worst_err, worst_iter, n_pairs, tried = 0.0, 0, 0, 0
    while n_pairs < 100:
        tried += 1
        g0, g4 = rng.uniform([10, -60, -60], [90, 60, 60], size=(2, 3))
        if not check_monotone(g0, g4).is_monotone:
            continue
        ts = compute_targets(g0, g4)
        for k in range(1, 4):
            worst_err = max(worst_err, abs(delta_e00(ts.g[0], ts.g[k]) - k / 4 * ts.total_span))
        worst_iter = max(worst_iter, max(ts.iterations))
        n_pairs += 1
    ok = worst_err <= 1e-6 and worst_iter <= BISECTION_MAX_ITER
    report(3, ok, f"{n_pairs} monotone pairs ({tried} drawn), max spacing err {worst_err:.1e}, max iterations {worst_iter}")


def test_04_monotonicity_sign():
    pairs = {
        "straight": (fx.STRAIGHT_G0, fx.STRAIGHT_G4),
        "lightness": (fx.LIGHTNESS_G0, fx.LIGHTNESS_G4),
        "span 11.94": fx.span_pair(11.94),
        "span 12.01": fx.span_pair(12.01),
        "neutral crossing": ((5.0, 1.0, 0.0), (5.0, -9.0, 0.0)),
        "non-monotone": (fx.NON_MONOTONE_G0, fx.NON_MONOTONE_G4),
    }
    results = []
    for name, (g0, g4) in pairs.items():
        grid = check_monotone(g0, g4, grid_step=1e-3).is_monotone
        brute = forward_difference_sign(g0, g4, 1e-5) > 0
        results.append((name, grid, brute))
    ok = all(g == b for _, g, b in results) and not results[-1][1]
    detail = ", ".join(f"{n}={'+' if g else '-'}" for n, g, _ in results)
    report(4, ok, f"agree on {sum(g == b for _, g, b in results)}/{len(results)}: {detail}")


def test_05_span_gate():
    got = {s: check_span(*fx.span_pair(s)).passed for s in (11.94, 12.0, 12.01)}
    ok = got == {11.94: False, 12.0: False, 12.01: True}
    report(5, ok, ", ".join(f"{s}->{'pass' if p else 'fail'}" for s, p in got.items()))


def test_06_end_to_end():
    straight = run_procedure(fx.straight_samples())
    curved = run_procedure(fx.curved_samples())
    lengths = straight.mapping.chosen_lengths if straight.feasible else None
    minima = straight.mapping.min_delta_e00[1:-1] if straight.feasible else (np.inf,)
    curved_minima = curved.mapping.min_delta_e00[1:-1] if curved.mapping else ()
    ok = (
        lengths == (0.0, 3.75, 7.5, 11.25, 15.0)
        and max(minima) <= 1e-6
        and curved.failed_stage == "mapping"
        and all(m > 3.0 for m in curved_minima)
    )
    report(
        6,
        ok,
        f"straight lengths {lengths}, max interior min {max(minima):.1e}; "
        f"curved failed at {curved.failed_stage} with minima {[round(m, 3) for m in curved_minima]}",
    )


def test_07_repeatability():
    center = np.array([52.0, -18.0, 24.0])

    def samples(labs):
        return [MeasuredSample(7.5, lab, fx.POSITION, k + 1) for k, lab in enumerate(labs)]

    same = analyze_repeats(samples([center] * 10))
    outlier = analyze_repeats(samples([center] * 9 + [center + (0, 8.0, 0)]))
    rng = np.random.default_rng(5)
    noisy = center + rng.normal(0, 0.6, size=(10, 3))
    ref = analyze_repeats(samples(list(noisy))).groups[0].reference
    exact = tuple(ref) == tuple(noisy.mean(axis=0))
    ok = (same.n_within, outlier.n_within, outlier.n_total) == (10, 9, 10) and exact
    report(7, ok, f"identical {same.n_within}/10, outlier {outlier.n_within}/10, mean reference exact={exact}")


def test_08_motor():
    a, b = length_to_steps(0.75), length_to_steps(15.0)
    report(8, (a, b) == (25, 500), f"0.75 mm -> {a} steps, 15.00 mm -> {b} steps")


def test_09_goldens(tmp_path):
    mapping = ScaleMapping.from_lengths(fx.GOLDEN_LENGTHS)
    mix = MixModel(fx.GOLDEN_YELLOW, fx.GOLDEN_GREEN, fx.GOLDEN_F_MAX)
    n_frames, mismatched, bad_stamps = 0, [], []
    for name in BUNDLED_SCRIPTS:
        script = load_bundled_script(name)
        out = tmp_path / name
        render_animation(script, mapping, mix, scale_px=fx.GOLDEN_SCALE_PX, out_dir=out)
        golden = sorted((HERE / "golden" / name).glob("frame_*.ppm"))
        if len(golden) != len(script.keyframes):
            mismatched.append(f"{name}: {len(golden)} goldens for {len(script.keyframes)} keyframes")
        for path in golden:
            n_frames += 1
            if (out / path.name).read_bytes() != path.read_bytes():
                mismatched.append(f"{name}/{path.name}")
        stamps = sorted({c.timestamp_s for c in compile_script(script, mapping).commands})
        if stamps != [float(k) for k in range(len(script.keyframes))]:
            bad_stamps.append(name)
    ok = n_frames > 0 and not mismatched and not bad_stamps
    report(9, ok, f"{n_frames} frames over {len(BUNDLED_SCRIPTS)} scripts, mismatched {mismatched}, bad timestamps {bad_stamps}")


def test_10_suite_runtime():
    # time the rest of the suite in a fresh interpreter, plus this module's own tests
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(HERE), "--ignore", str(Path(__file__))],
        capture_output=True,
        text=True,
        cwd=HERE.parent,
        env={**os.environ, "PYTHONDONTWRITEBYTECODE": "1"},
    )
    rest = time.perf_counter() - t0
    t1 = time.perf_counter()
    for fn in (test_01_sharma_dataset, test_02_random_pair_axioms, test_03_target_spacing,
               test_04_monotonicity_sign, test_05_span_gate, test_06_end_to_end,
               test_07_repeatability, test_08_motor):
        with _quiet():
            fn()
    own = time.perf_counter() - t1
    total = rest + own
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    report(10, proc.returncode == 0 and total < SUITE_BUDGET_S, f"suite {total:.1f} s (< {SUITE_BUDGET_S:.0f} s): {tail}")


class _quiet:
    def __enter__(self):
        self.saved = report.capman
        report.capman = None
        self.stdout = sys.stdout
        sys.stdout = open(os.devnull, "w")

    def __exit__(self, *exc):
        sys.stdout.close()
        sys.stdout = self.stdout
        report.capman = self.saved


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
