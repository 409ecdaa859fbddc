from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from abelfm.ring import builtin_model

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def classes(model_name, degree=None, coeff=small_rationals):
    """Strategy for random classes on a built-in model, optionally homogeneous."""
    model = builtin_model(model_name)
    idx = range(model.rank) if degree is None else model.degree_indices(degree)

    def build(values):
        coeffs = [Fraction(0)] * model.rank
        for i, v in zip(idx, values):
            coeffs[i] = v
        return model.from_coeffs(coeffs)

    return st.lists(coeff, min_size=len(idx), max_size=len(idx)).map(build)


@pytest.fixture
def V():
    return builtin_model("V")


@pytest.fixture
def W():
    return builtin_model("Vdual")


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
