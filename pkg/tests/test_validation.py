import math

import pytest

from photonsep.validation import CHECKS, check_names, run_checks


def test_suite_size_and_unique_names():
    names = check_names()
    assert len(names) >= 15 and len(set(names)) == len(names)


@pytest.mark.parametrize("name", check_names())
def test_check_passes(name):
    (result,) = run_checks([name])
    assert result.error is None, result.error
    assert result.passed, f"{name}: measured {result.measured:.3e} > {result.tolerance:.3e}"


def test_tamper_forces_failure():
    (result,) = run_checks(["cg_known_values"], tamper=("cg_known_values",))
    assert not result.passed and result.tolerance < 0


def test_tamper_rejects_unknown_names():
    with pytest.raises(ValueError):
        run_checks(["cg_known_values"], tamper=("nope",))


def test_crashing_check_is_reported(monkeypatch):
    from photonsep import validation

    def boom():
        raise RuntimeError("broken")

    broken = validation.Check("broken", 1.0, boom)
    monkeypatch.setattr(validation, "CHECKS", CHECKS + (broken,))
    (result,) = validation.run_checks(["broken"])
    assert not result.passed and math.isnan(result.measured) and "broken" in result.error
