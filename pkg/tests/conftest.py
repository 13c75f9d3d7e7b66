import numpy as np
import pytest

from hypcone.cone import cone, cone_map, grid
from hypcone.splitting import cone_frame_field


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def equidistant_cone():
    """Default desk-scale cone: helicoid(1, 1) in the equidistant H^3 (d = 0.7) of H^4."""
    spec = cone("helicoid", "equidistant", n=4, d=0.7, t_range=(-3.0, 3.0))
    return spec, cone_map(spec), cone_frame_field(spec)


@pytest.fixture(scope="session")
def horosphere_cone():
    spec = cone("helicoid", "horosphere", n=4, t_range=(-3.0, 3.0))
    return spec, cone_map(spec), cone_frame_field(spec)


@pytest.fixture(scope="session")
def small_grid(equidistant_cone):
    spec, _, _ = equidistant_cone
    return grid(spec, 5, t_range=(-2.0, 2.0))


ACCEPTANCE_LINES = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion and assert every condition."""
    lines = request.config.stash.setdefault(ACCEPTANCE_LINES, [])

    def record(label, conditions):
        ok = all(passed for _, passed in conditions)
        detail = "; ".join(f"{text} [{'ok' if passed else 'FAIL'}]" for text, passed in conditions)
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(" ")[0])):
            terminalreporter.write_line(line)
