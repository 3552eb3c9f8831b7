from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def rationals(bound=20, den=6):
    return st.builds(Fraction, st.integers(-bound, bound), st.integers(1, den))


def vec2(bound=20, den=6):
    return st.tuples(rationals(bound, den), rationals(bound, den))


def vec3(bound=20, den=6):
    return st.tuples(rationals(bound, den), rationals(bound, den), rationals(bound, den))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record_acceptance():
    def record(n: int, ok: bool, detail: str):
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record
