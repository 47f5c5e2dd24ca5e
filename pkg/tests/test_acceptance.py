"""Top-level acceptance checks, one test per numbered criterion.

Each test prints a single pass/fail line for its criterion and enforces the
runtime budget where one is stated (measured here, never stored in reports).
"""
import time

from magicmodels.acceptance import (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
    run_suite,
)

RUNTIME_BOUNDS = {1: 1.0, 2: 1.0, 3: 5.0, 5: 1.0, 6: 1.0}


def _run(number, fn, **kwargs):
    start = time.perf_counter()
    result = fn(**kwargs)
    elapsed = time.perf_counter() - start
    verdict = "PASS" if result["passed"] else "FAIL"
    print(f"criterion {number:2d} [{result['name']}]: {verdict}")
    assert result["criterion"] == number
    assert result["passed"], result
    bound = RUNTIME_BOUNDS.get(number)
    if bound is not None:
        assert elapsed < bound, f"criterion {number} took {elapsed:.2f}s"
    return result


def test_criterion_01_no_family_counterexample():
    _run(1, criterion_1)


def test_criterion_02_induced_model_stationarity():
    _run(2, criterion_2)


def test_criterion_03_family_models_certify():
    _run(3, criterion_3)


def test_criterion_04_single_fiber_negative_control():
    _run(4, criterion_4)


def test_criterion_05_spectral_block_models():
    _run(5, criterion_5)


def test_criterion_06_twisted_cyclic_model():
    _run(6, criterion_6)


def test_criterion_07_trace_vector_equivalence():
    result = _run(7, criterion_7, seed=0, samples=200)
    assert result["details"]["disagreements"] == 0
    assert result["details"]["exact_checked"] == 126


def test_criterion_08_fixed_point_projection():
    _run(8, criterion_8)


def test_criterion_09_cyclic_symmetry():
    _run(9, criterion_9)


def test_criterion_10_uniformity_certificates():
    _run(10, criterion_10)


def test_criterion_11_determinism_and_float_agreement():
    _run(11, criterion_11, seed=0, samples=200)


def test_full_suite_reports_all_pass():
    result = run_suite()
    assert result["passed"]
    numbers = [c["criterion"] for c in result["criteria"]]
    assert numbers == list(range(1, 12))
    assert all(c["passed"] for c in result["criteria"])
