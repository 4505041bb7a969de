"""Smoke tests for the _liouville extension module."""

import json
import math
import os
import subprocess

import pytest

import _liouville as lv


def test_counts_and_radius():
    assert lv.ceil_alpha(2.5) == 3
    assert lv.solution_count(2.5) == 5
    assert abs(lv.polygon_radius(2.5, 3) - (1 / 13) ** (1 / 6)) < 1e-14
    with pytest.raises(lv.LiouvilleError):
        lv.polygon_radius(1.0, 2)


def test_hamiltonian_and_gradient():
    pts = lv.polygon_config(2.5, 3)
    grad = lv.grad_phi_m(pts, 2.5)
    assert max(abs(g) for g in grad) < 1e-10
    val = lv.phi_m([0.5 + 0j], 2.0)
    assert abs(val - (4 * math.log(0.5) + 2 * math.log(0.75))) < 1e-13


def test_spectral_det_law():
    mb = lv.mode_block(2.5, 3, 1)
    rho = (1 / 13) ** (1 / 3)
    assert abs(mb.det - (-16.0 * 13 ** (1 / 3))) < 1e-10
    eigs, zero_vec, zero_count = lv.full_spectrum(2.5, 3)
    assert zero_count == 1
    assert len(eigs) == 6
    assert lv.dft_conjugation_residual(2.5, 3) < 1e-11


def test_radial_branches():
    roots = lv.solve_Lambda(1.0, 1.0)
    assert len(roots) == 2
    assert abs(roots[0] * roots[1] - 1024.0) < 1e-6  # Vieta for x^2-960x+1024
    assert abs(lv.mass(roots[1], 1.0) - 48.64) < 0.01
    assert abs(lv.shoot(1.0, 1.0, math.log(roots[0] / 1.0))) < 1e-7
    assert lv.lambda_max(1.0) == pytest.approx(8.0)
    assert lv.degeneracy_lambda(1, 1.0) == pytest.approx(6.0)


def test_e0():
    angles = [2 * math.pi * j / 4 for j in range(4)]
    assert lv.e0_value(angles) == pytest.approx(10.0)


def test_polynomials():
    coeffs = lv.limit_family(3, 0.0, 0.0)
    assert lv.limit_identity_residual(coeffs) < 1e-13
    sum_re, max_re, _ = lv.root_structure_report(coeffs)
    assert sum_re == pytest.approx(-3.0, abs=1e-9)
    assert max_re == pytest.approx(4 ** (1 / 3) - 1, abs=1e-9)


def test_multistart():
    s = lv.multistart_search(2.5, 3, restarts=30, seed=5)
    assert len(s.distinct_classes) == 1
    cls = s.distinct_classes[0]
    assert cls.verdict == "polygon"
    assert cls.radius == pytest.approx((1 / 13) ** (1 / 6), abs=1e-7)


def test_pde_solve():
    f = lv.pde2d_solve(1.0, 1.0, nr=24, nt=24, init="radial-singular")
    pr = f.peak_report()
    assert pr.residual_norm < 1e-10
    assert pr.mass < 16 * math.pi
    assert f.angular_monotonicity(1, 0.5) == "flat"
    assert f.power_map_check(2) < 1e-9


def test_cli_roundtrip():
    cli = os.environ.get("LIOUVILLE_CLI")
    if not cli:
        pytest.skip("LIOUVILLE_CLI not set")
    out = subprocess.run([cli, "count", "--alpha", "2.5"], capture_output=True, check=True)
    data = json.loads(out.stdout)
    assert data["classes"] == 5
