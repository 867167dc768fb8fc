"""Acceptance gate: one test per criterion, each at its stated tolerance.

Every test prints a single ``ACn ... PASS|FAIL`` line (visible with ``-v``
or ``-s``) before asserting.
"""

import json
import math
import os
import subprocess
import sys
import textwrap
import time

import numpy as np
import pytest

from fractv.corpus import fields_2d, gaussian_bump_2d, rng_for, signals_1d
from fractv.verify import (
    check_caputo_equiv,
    check_integral_bound,
    check_lsc_order,
    check_monotonicity,
    check_order_limits,
    check_power_rule,
    check_semigroup,
    check_strict_approx_scaling,
    check_translation_estimate,
    check_tv_equivalence,
)

SEED = 7
SINGLE_CORE = {
    **os.environ,
    "OPENBLAS_NUM_THREADS": "1",
    "OMP_NUM_THREADS": "1",
    "MKL_NUM_THREADS": "1",
    "FRACTV_THREADS": "1",
}


@pytest.fixture
def verdict(capsys):
    def emit(tag: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n{tag}: {'PASS' if ok else 'FAIL'} -- {detail}")

    return emit


def summarize(reports) -> tuple[bool, str]:
    worst = min(reports, key=lambda r: r.margin)
    failed = [r.label for r in reports if not r.passed]
    ok = not failed
    detail = f"{len(reports) - len(failed)}/{len(reports)} cases, tightest {worst.label} margin {worst.margin:.3g}"
    if failed:
        bad = [f"{c.label} ({c.measured:.4g} vs {c.bound:.4g})" for r in reports for c in r.checks if c.margin < 0]
        detail += "; failing: " + ", ".join(failed) + " :: " + "; ".join(bad)
    return ok, detail


def test_ac01_power_rule(verdict):
    t = time.perf_counter()
    reps = [check_power_rule(s, k, 1024) for s in (0.25, 0.5, 0.75) for k in (0, 1, 2)]
    elapsed = time.perf_counter() - t
    ok, detail = summarize(reps)
    ok = ok and elapsed < 5.0
    verdict("AC1 power rule", ok, f"{detail}; {elapsed:.2f}s")
    assert ok


def test_ac02_semigroup_and_integral_bound(verdict):
    t = time.perf_counter()
    reps = [check_semigroup(a, b, 512, SEED) for a, b in ((0.5, 0.5), (0.3, 0.4), (1.0, 1.0))]
    reps += [check_integral_bound(r, p, 512, SEED, count=20)
             for r in (0.5, 1.0, 2.0) for p in (1.0, 2.0, math.inf)]
    elapsed = time.perf_counter() - t
    ok, detail = summarize(reps)
    ok = ok and elapsed < 10.0
    verdict("AC2 semigroup + integral bound", ok, f"{detail}; {elapsed:.2f}s")
    assert ok


def test_ac03_caputo_equivalence(verdict):
    reps = [check_caputo_equiv(r, 512, SEED) for r in (0.3, 0.5, 1.0, 1.5)]
    ok, detail = summarize(reps)
    verdict("AC3 Caputo/R-L equivalence", ok, detail)
    assert ok


def test_ac04_lp_equivalence(verdict):
    fields = fields_2d(128, rng_for("tv_equivalence", SEED), 50)
    pairs = ((1.0, 2.0), (1.0, math.inf), (2.0, math.inf))
    reps = [check_tv_equivalence(fields, r, q, p) for r in (0.5, 1.0, 1.5) for q, p in pairs]
    ok, detail = summarize(reps)
    verdict("AC4 l^p equivalence of TV^r", ok, detail)
    assert ok


def test_ac05_monotonicity(verdict):
    coarse = fields_2d(256, rng_for("monotonicity", SEED), 20, image_class=True)
    fine = fields_2d(512, rng_for("monotonicity", SEED), 20, image_class=True)
    rep = check_monotonicity(coarse, fine, 0.3, 0.7, 1024)
    ok, detail = summarize([rep])
    verdict("AC5 monotonicity", ok, detail)
    assert ok


def test_ac06_translation_estimate(verdict):
    n = 256
    signals = signals_1d(n, rng_for("translation_estimate", SEED), 20, piecewise_constant=True)
    shifts = [n // 64, n // 32, n // 16, n // 8]
    reps = [check_translation_estimate(signals, s, shifts) for s in (0.3, 0.5, 0.7)]
    ok, detail = summarize(reps)
    verdict("AC6 translation estimate", ok, detail)
    assert ok


def test_ac07_order_limits(verdict):
    rep = check_order_limits(1024)
    ok, detail = summarize([rep])
    verdict("AC7 order-limit continuity", ok, detail)
    assert ok


def test_ac08_lsc(verdict):
    reps = [check_lsc_order(recipe, 1024, ladder=(16, 24, 32, 48, 64), n0=16)
            for recipe in ("constant", "oscillation", "drift")]
    ok, detail = summarize(reps)
    verdict("AC8 LSC tail bounds", ok, detail)
    assert ok


def test_ac09_strict_approximation(verdict):
    u, uf = gaussian_bump_2d(256), gaussian_bump_2d(512)
    reps = [check_strict_approx_scaling(u, uf, r, (0.2, 0.1, 0.05)) for r in (0.5, 1.5)]
    ok, detail = summarize(reps)
    verdict("AC9 strict-approximation scaling", ok, detail)
    assert ok


DENOISE_MATRIX = textwrap.dedent("""
    import json, time
    import numpy as np
    from fractv.denoise import Dataset, DenoiseConfig, denoise, order_search
    from fractv.grid import l1_integral

    n = 128
    x = np.linspace(0, 1, n + 1)
    X, Y = np.meshgrid(x, x)
    disc = ((X - 0.5) ** 2 + (Y - 0.5) ** 2 < 0.09).astype(float)
    smooth = (0.5 + 0.3 * np.exp(-((X - 0.4) ** 2 + (Y - 0.6) ** 2) / 0.05)
              + 0.1 * np.cos(3 * np.pi * X) * np.sin(2 * np.pi * Y))
    rng = np.random.default_rng(7)
    images = [u + 0.05 * rng.standard_normal(u.shape) for u in (disc, smooth)]
    cases = ((0.01, 0.5), (0.01, 1.0), (0.002, 1.5), (0.02, 1.0), (0.0005, 2.0))
    out = {"runs": []}
    t0 = time.perf_counter()
    for i, img in enumerate(images):
        for alpha, r in cases:
            rep = denoise(img, DenoiseConfig(alpha=alpha, r=r, max_iters=300, tol=1e-6))
            e = np.array(rep.energy)
            worst = float(np.max(np.diff(e) / np.abs(e[:-1]))) if e.size > 1 else 0.0
            out["runs"].append({"image": i, "alpha": alpha, "r": r, "iters": rep.iterations,
                                "max_rel_increase": worst})
    out["matrix_seconds"] = time.perf_counter() - t0
    rep = denoise(images[0], DenoiseConfig(alpha=1e-12, r=1.0))
    out["tiny_alpha_l1"] = l1_integral(rep.u - images[0])
    small = [(u[::2, ::2], v[::2, ::2]) for u, v in zip((disc, smooth), images)]
    res = order_search(Dataset(tuple(small)), [0.5, 1.0, 1.5],
                       DenoiseConfig(alpha=0.01, max_iters=100), workers=1)
    out["search_best"] = res.best_r
    out["search_table"] = res.table
    print(json.dumps(out))
""")


def test_ac10_denoiser(verdict):
    proc = subprocess.run([sys.executable, "-c", DENOISE_MATRIX], capture_output=True, text=True,
                          env=SINGLE_CORE, timeout=600)
    assert proc.returncode == 0, proc.stderr
    out = json.loads(proc.stdout)
    monotone = all(run["max_rel_increase"] <= 1e-12 for run in out["runs"])
    table = out["search_table"]
    argmin = table[int(np.argmin([row["total_loss"] for row in table]))]["r"]
    checks = {
        "traces non-increasing": monotone and len(out["runs"]) == 10,
        "alpha=1e-12 recovers input": out["tiny_alpha_l1"] <= 1e-6,
        "search returns own argmin": out["search_best"] == argmin,
        "matrix < 120 s": out["matrix_seconds"] < 120,
    }
    ok = all(checks.values())
    detail = ", ".join(f"{k}={'yes' if v else 'NO'}" for k, v in checks.items())
    detail += f"; matrix {out['matrix_seconds']:.1f}s, tiny-alpha L1 {out['tiny_alpha_l1']:.2e}"
    verdict("AC10 denoiser", ok, detail)
    assert ok


def test_ac11_determinism(verdict, tmp_path):
    timings = []
    for tag in ("a", "b"):
        t = time.perf_counter()
        proc = subprocess.run(
            [sys.executable, "-m", "fractv", "verify", "--suite", "all", "--n", "256", "--seed", "7",
             "--report", str(tmp_path / tag)],
            capture_output=True, text=True, env=SINGLE_CORE, timeout=600,
        )
        timings.append(time.perf_counter() - t)
        # exit 3 only signals failed experiments; anything else is a crash
        assert proc.returncode in (0, 3), proc.stderr
    same = all((tmp_path / f"a{ext}").read_bytes() == (tmp_path / f"b{ext}").read_bytes()
               for ext in (".csv", ".json", ".png"))
    ok = same and max(timings) < 60
    verdict("AC11 determinism", ok, f"identical reports={same}; runs {timings[0]:.1f}s / {timings[1]:.1f}s")
    assert ok
