"""Acceptance gate: ten criteria, one PASS/FAIL line each.

Each test gathers named boolean checks, prints exactly one
"criterion N: PASS|FAIL" line on the real stdout, then asserts.  Frozen
reference values are regenerable with tools/recompute_oracles.py.
"""
import contextlib
import json
import math
import shutil
import subprocess
import time

import numpy as np
import pytest

from bgls_osc import (apply_operator, bgls_norm, bump_profile,
                      check_nondegeneracy, check_support, conjugate_ratio,
                      conjugate_ratio_reduced, const_one,
                      decay_scaling_profile, endpoint_gap_identity,
                      fourier_kernel, fresnel_I, lp_curve, lp_norm,
                      make_witness, psi0_weight, psi_dirac, psi_one,
                      theorem1_scan, theorem2_check, theorem2_scan,
                      theorem3_scan, theorem4_scan, verify_witness,
                      witness_f0, PhaseAmplitudeKernel)

SQRT_PI_2 = 1.2533141373155003


class Checks(list):
    def add(self, name, ok):
        self.append((name, bool(ok)))


@contextlib.contextmanager
def criterion(capsys, n):
    checks = Checks()
    try:
        yield checks
    except BaseException:
        with capsys.disabled():
            print("criterion %d: FAIL" % n)
        raise
    ok = bool(checks) and all(flag for _, flag in checks)
    with capsys.disabled():
        print("criterion %d: %s" % (n, "PASS" if ok else "FAIL"))
    assert ok, "failed: %s" % [name for name, flag in checks if not flag]


def test_criterion_01_witness_norms(capsys):
    with criterion(capsys, 1) as c:
        t0 = time.perf_counter()
        worst, rows = verify_witness(p_grid=(1.01, 1.25, 1.5, 1.75, 1.99))
        elapsed = time.perf_counter() - t0
        c.add("five exponents", len(rows) == 5)
        c.add("rel err < 1e-6", worst < 1e-6)
        c.add("runtime < 5 s", elapsed < 5.0)


def test_criterion_02_operator_closed_forms(capsys, kernel):
    xs = np.array([0.1, 0.5, 1.0])
    with criterion(capsys, 2) as c:
        t0 = time.perf_counter()
        for lam in (8.0, 64.0):
            sinc_field = apply_operator(kernel, lam, const_one(), x_grid=xs)
            ref = 2.0 * np.sin(lam * xs) / (lam * xs)
            rel = np.max(np.abs(sinc_field.values - ref) / np.abs(ref))
            c.add("sinc lam=%g rel < 1e-8" % lam, rel < 1e-8)

            f0_field = apply_operator(kernel, lam, witness_f0(), x_grid=xs)
            ref0 = np.array([2.0 * fresnel_I(lam * x) / math.sqrt(lam * x)
                             for x in xs])
            rel0 = np.max(np.abs(f0_field.values - ref0) / np.abs(ref0))
            c.add("witness lam=%g rel < 1e-5" % lam, rel0 < 1e-5)
        c.add("runtime < 30 s", time.perf_counter() - t0 < 30.0)


def test_criterion_03_fresnel_suite(capsys):
    with criterion(capsys, 3) as c:
        for k in range(7):
            lam = 10.0 ** k
            c.add("tail bound at 1e%d" % k,
                  abs(fresnel_I(lam) - SQRT_PI_2) <= 2.0 / math.sqrt(lam))
        small = np.geomspace(1e-6, 1.0, 49)
        ratios = np.array([fresnel_I(v) / math.sqrt(v) for v in small])
        c.add("small-range lower 1.5", bool(np.all(ratios >= 1.5)))
        c.add("small-range upper 2", bool(np.all(ratios <= 2.0 * (1 + 1e-9))))
        c.add("limit at 1e-6",
              abs(fresnel_I(1e-6) / math.sqrt(1e-6) - 2.0) <= 1e-5)


def test_criterion_04_bgls_identities(capsys):
    with criterion(capsys, 4) as c:
        wit = make_witness()
        unit = bgls_norm(wit.lp_curve, wit.psi0)
        c.add("unit witness norm", abs(unit.value - 1.0) <= 1e-4)

        for f in (witness_f0(), const_one(), bump_profile()):
            curve = lp_curve(f, 1.0, 2.0)
            picked = bgls_norm(curve, psi_dirac(1.5)).value
            direct = lp_norm(f, 1.5)
            c.add("dirac pick = lp_norm (%s)" % f.name,
                  abs(picked - direct) / direct <= 1e-8)

        base = bgls_norm(wit.lp_curve, wit.psi0).value
        c.add("homogeneity", abs(
            bgls_norm(wit.lp_curve.scaled(3.0), wit.psi0).value
            - 3.0 * base) / (3.0 * base) <= 1e-9)
        c.add("weight scaling", abs(
            bgls_norm(wit.lp_curve, wit.psi0.scaled(2.0)).value
            - base / 2.0) / (base / 2.0) <= 1e-9)


def test_criterion_05_upper_bound_sweep(capsys, kernel):
    with criterion(capsys, 5) as c:
        t0 = time.perf_counter()
        rep = theorem1_scan(kernel,
                            lambda_grid=[4.0, 16.0, 64.0, 256.0, 1024.0],
                            q_max=64.0, refine=2)
        elapsed = time.perf_counter() - t0
        c.add("all cells converged", rep.all_converged())
        c.add("sup finite", math.isfinite(rep.empirical_sup))
        c.add("sup positive", rep.empirical_sup > 0.0)
        c.add("refinement delta < 5%", rep.refinement_delta < 0.05)
        z = rep.Z_values.ravel()
        c.add("sandwich", bool(np.all((rep.empirical_inf_Z <= z + 1e-12)
                                      & (z <= rep.empirical_sup + 1e-12))))
        c.add("runtime < 5 min", elapsed < 300.0)


def test_criterion_06_lower_bound_corner(capsys, kernel):
    with criterion(capsys, 6) as c:
        inf_w, rep = theorem3_scan(kernel,
                                   lambda_grid=[64.0, 256.0, 1024.0],
                                   p_grid=[1.9, 1.95, 1.99], refine=2)
        c.add("all cells converged", rep.all_converged())
        c.add("floor > 0.05", inf_w > 0.05)
        c.add("floor refinement-stable", rep.refinement_delta < 0.05)

        ps = np.linspace(1.001, 1.999, 999)
        worst_closed = max(
            abs(conjugate_ratio(p) - conjugate_ratio_reduced(p))
            / conjugate_ratio_reduced(p) for p in ps)
        c.add("ratio closed form 1e-12", worst_closed <= 1e-12)
        worst_gap = max(abs(l - r) / r for l, r in
                        (endpoint_gap_identity(p) for p in ps))
        c.add("endpoint identity 1e-12", worst_gap <= 1e-12)
        vals = np.array([conjugate_ratio_reduced(p) for p in ps])
        i = int(np.argmin(vals))
        c.add("ratio min in (0.3, 1]", 0.3 < vals[i] <= 1.0)
        c.add("ratio min interior", 0 < i < ps.size - 1)


def test_criterion_07_witness_pair_floor(capsys, kernel):
    with criterion(capsys, 7) as c:
        inf_z, rep = theorem4_scan(
            kernel, lambda_grid=[2.0, 8.0, 32.0, 128.0, 512.0], refine=2)
        c.add("all cells converged", rep.all_converged())
        c.add("floor > 0.05", inf_z > 0.05)
        c.add("floor refinement-stable", rep.refinement_delta < 0.05)
        z = rep.Z_values
        c.add("sandwich", bool(np.all((inf_z <= z + 1e-12)
                                      & (z <= rep.empirical_sup + 1e-12))))
        prof = decay_scaling_profile(kernel, lambdas=(16.0, 256.0),
                                     rs=(3.0, 4.0, 6.0))
        c.add("decay profile converged", prof.converged)
        c.add("factor-4 band", prof.band_ratio <= 4.0)


def test_criterion_08_factorized_bound(capsys, kernel):
    with criterion(capsys, 8) as c:
        rep = theorem2_scan(kernel, lambda_grid=[4.0, 64.0], refine=2)
        c.add("all cells converged", rep.all_converged())
        c.add("ratios finite", bool(np.all(np.isfinite(rep.Z_values))))
        c.add("refinement delta < 5%", rep.refinement_delta < 0.05)
        flat = theorem2_check(kernel, 16.0, psi0_weight(), psi_one(),
                              witness_f0(), q_max=16.0)
        c.add("flat-zeta fundamental = lam^d",
              abs(flat.fundamental - 16.0) / 16.0 <= 1e-3)


def test_criterion_09_kernel_admissibility(capsys, kernel):
    with criterion(capsys, 9) as c:
        c.add("fourier nondegenerate",
              abs(check_nondegeneracy(kernel) - 1.0) <= 1e-6)
        shear = PhaseAmplitudeKernel(
            name="shear", dim=1,
            phase=lambda x, y: x + np.asarray(y, dtype=float),
            amplitude=lambda x, y: np.ones_like(np.asarray(y, dtype=float)),
            support_radius=3.0)
        c.add("additive phase degenerate",
              abs(check_nondegeneracy(shear)) <= 1e-6)
        flat = PhaseAmplitudeKernel(
            name="flat", dim=1,
            phase=lambda x, y: x * np.asarray(y, dtype=float),
            amplitude=lambda x, y: np.ones_like(np.asarray(y, dtype=float)),
            support_radius=2.0)
        c.add("support violation rejected", not check_support(flat))
        c.add("fourier support ok", check_support(kernel))


def test_criterion_10_cli_determinism(capsys, tmp_path):
    with criterion(capsys, 10) as c:
        exe = shutil.which("bgls-osc")
        c.add("console script installed", exe is not None)
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(
            {"schema": 1, "theorem": 4, "lambda_grid": [2, 8],
             "q_max": 8, "refine": 0}))
        blobs = []
        for sub in ("r1", "r2"):
            r = subprocess.run(
                [exe, "scan", "--config", str(cfg_path),
                 "--out", str(tmp_path / sub)],
                capture_output=True, text=True, timeout=300)
            c.add("run %s exit 0" % sub, r.returncode == 0)
            blobs.append(
                (tmp_path / sub / "scan_theorem4.csv").read_bytes())
        c.add("byte-identical CSVs", blobs[0] == blobs[1])
