from pathlib import Path

import pytest

from cyberins import BreachProbSpec, ScenarioAParams, ScenarioBParams, UtilitySpec, ValueScaleSpec

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def sqrt_u():
    return UtilitySpec("power", 0.5)


@pytest.fixture
def canon_a(sqrt_u):
    return ScenarioAParams(V=10.0, W=50.0, L=20.0, psi=1.0, alpha=0.1, gamma=0.5, utility=sqrt_u)


@pytest.fixture
def canon_b(sqrt_u):
    return ScenarioBParams(
        W=10.0, L=5.0, k=4,
        breach=BreachProbSpec("compound", p1=0.05),
        scale=ValueScaleSpec("power", 0.5),
        utility=sqrt_u,
    )


@pytest.fixture
def configs_dir():
    return CONFIGS


ACCEPTANCE = {}


@pytest.fixture
def record():
    """Store one verdict line per acceptance criterion."""
    def _record(number: int, ok: bool, detail: str):
        ACCEPTANCE[number] = (ok, detail)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
