import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from betatiling.algebra import verify_pisot  # noqa: E402
from betatiling.geometry import compute_splitting  # noqa: E402
from betatiling.numeration import kneading_of  # noqa: E402
from betatiling.substitution import abelianize_and_perron, build_substitution  # noqa: E402

GOLDEN = "x^2-3x+1"
FIBONACCI = "x^2-x-1"
TRIBONACCI = "x^3-x^2-x-1"
PLASTIC = "x^3-x-1"
NONSIMPLE_P2 = "x^3-2x^2-x+1"  # kneading 2(01)

# degree >= 2 Pisot polynomials used across the suite
FIELDS = [
    GOLDEN,
    FIBONACCI,
    TRIBONACCI,
    PLASTIC,
    NONSIMPLE_P2,
    "x^2-2x-1",
    "x^2-4x+2",
    "x^3-x^2-1",
    "x^3-3x^2+2x-1",
    "x^4-x^3-x^2-x-1",
]


class Pipe:
    def __init__(self, poly):
        self.poly = poly
        self.field = verify_pisot(poly)
        self.kneading = kneading_of(self.field)
        self.rule = build_substitution(self.kneading, self.field)
        self.matrix, self.perron, self.primitive = abelianize_and_perron(self.rule, self.field)

    @functools.cached_property
    def splitting(self):
        return compute_splitting(self.matrix, self.field, self.perron)


@functools.lru_cache(maxsize=None)
def pipe(poly) -> Pipe:
    return Pipe(poly)


@pytest.fixture
def golden():
    return pipe(GOLDEN)


@pytest.fixture(params=FIELDS)
def any_pipe(request):
    return pipe(request.param)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
