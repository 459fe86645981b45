"""Acceptance criteria at the full configuration (64 restarts, 100 samples).

Each test prints one PASS/FAIL line for its criterion; the detailed rows
are the same ones ``gesforge verify-paper --full`` reports.
"""

import os
import subprocess
import sys
import time

import pytest

from gesforge import verify

FULL = verify.SuiteConfig.full(0xA5A5)


@pytest.fixture
def report(capsys):
    def emit(cid, title, rows, elapsed, limit=None):
        ok = all(r.passed for r in rows) and (limit is None or elapsed < limit)
        timing = f"{elapsed:.1f}s" + (f" (limit {limit:g}s)" if limit else "")
        with capsys.disabled():
            print(f"\ncriterion {cid:>2} {'PASS' if ok else 'FAIL'}  {title}  [{timing}]")
            for r in rows:
                print(f"    {'ok ' if r.passed else 'BAD'} {r.name}: expected {r.expected}, "
                      f"computed {r.computed}, tol {r.tolerance}")
        return ok
    return emit


def timed(check):
    t0 = time.perf_counter()
    rows = check(FULL)
    return rows, time.perf_counter() - t0


def test_criterion_01_antisymmetric_measure(report):
    rows, dt = timed(verify.check_antisymmetric_measure)
    assert report(1, "antisymmetric subspace measure = 1/2, d = 2, 3, 4", rows, dt, 5)


def test_criterion_02_werner_threshold(report):
    rows, dt = timed(verify.check_werner_threshold)
    assert report(2, "Werner square-domain threshold", rows, dt)


def test_criterion_03_witness_arithmetic(report):
    rows, dt = timed(verify.check_witness_arithmetic)
    assert report(3, "witness value 0.14 for two Werner copies at s = 0.8", rows, dt)


def test_criterion_04_cren_grid(report):
    rows, dt = timed(verify.check_cren_grid)
    assert report(4, "CREN bound equals s1 s2 - 1/2 on a 5x5 grid", rows, dt)


def test_criterion_05_chain_measures(report):
    rows, dt = timed(verify.check_chain_measures)
    assert report(5, "chain of two antisym 3x3 parts: per-cut measures", rows, dt, 60)


def test_criterion_06_ideal_channel_identity(report):
    rows, dt = timed(verify.check_ideal_channel_identity)
    assert report(6, "ancilla extension leaves nu_inf unchanged", rows, dt)


def test_criterion_07_example_w(report):
    rows, dt = timed(verify.check_example_w)
    assert report(7, "16-dim example equals the Johnston chain", rows, dt)


@pytest.mark.slow
def test_criterion_08_npt_distill(report):
    rows, dt = timed(verify.check_npt_distill)
    assert report(8, "100 states on the 16-dim example: NPT and rank-2 witnesses", rows, dt, 300)


def test_criterion_09_joined_products(report):
    rows, dt = timed(verify.check_joined_products)
    assert report(9, "joined products of entangled pairs are genuinely entangled", rows, dt)


def test_criterion_10_invariants(report):
    rows, dt = timed(verify.check_invariants)
    assert report(10, "linear-algebra invariants on 100 random instances", rows, dt)


@pytest.mark.slow
def test_criterion_11_determinism(report):
    cmd = [sys.executable, "-m", "gesforge", "verify-paper", "--fast", "--seed", "0xA5A5"]
    env = {k: v for k, v in os.environ.items() if k != "GESFORGE_SEED"}
    t0 = time.perf_counter()
    runs = [subprocess.run(cmd, capture_output=True, env=env) for _ in range(2)]
    dt = time.perf_counter() - t0
    same = runs[0].stdout == runs[1].stdout and len(runs[0].stdout) > 0
    codes = [r.returncode for r in runs]
    row = verify.Row(11, "verify-paper --fast twice, stdout byte-identical", "True", str(same), "exact", same)
    exit_row = verify.Row(11, "verify-paper --fast exit codes", "[0, 0]", str(codes), "exact", codes == [0, 0])
    assert report(11, "determinism of the reproduction report", [row, exit_row], dt)
