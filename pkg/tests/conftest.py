import random

import pytest

from wittkit.rings import (
    CommPoly,
    FreeAssoc,
    Integers,
    MatrixRing,
    Modular,
    ProductRing,
)

ACCEPTANCE_RESULTS: dict = {}

RING_INSTANCES = {
    "Z": Integers(),
    "Z/6": Modular(6),
    "Z/7": Modular(7),
    "M2(Z)": MatrixRing(2, Integers()),
    "M2(Z/5)": MatrixRing(2, Modular(5)),
    "Z<a,b>": FreeAssoc(("a", "b"), 5),
    "Z[x,y]": CommPoly(("x", "y"), Integers()),
    "Z/5[x]": CommPoly(("x",), Modular(5)),
    "Z x Z/3": ProductRing(Integers(), Modular(3)),
    "M2(Z<a,b>)": MatrixRing(2, FreeAssoc(("a", "b"), 4)),
}


@pytest.fixture(params=sorted(RING_INSTANCES), ids=sorted(RING_INSTANCES))
def any_ring(request):
    return RING_INSTANCES[request.param]


@pytest.fixture
def rng():
    return random.Random(20240501)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, title = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}")
