from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from pbmetric import PartialBMetricSpace, SelfMap
from pbmetric.golden import example1_map, example1_space

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture
def ex1():
    return example1_space(), example1_map()


@pytest.fixture
def chain():
    d = {("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 2}

    def p(x, y):
        return 0 if x == y else d.get((x, y), d.get((y, x)))

    space = PartialBMetricSpace.from_function("abc", p, 1)
    return space, SelfMap.from_dict({"a": "a", "b": "a", "c": "b"})


@st.composite
def finite_spaces(draw, max_points=4, top=12, den=4):
    """Random tables obeying pm1-pm3 (pm4 then holds for the minimal s)."""
    n = draw(st.integers(1, max_points))
    P = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            P[i][j] = P[j][i] = draw(st.integers(1, top))
    for i in range(n):
        row_min = min((P[i][j] for j in range(n) if j != i), default=top)
        P[i][i] = draw(st.integers(0, row_min))
    for i in range(n):
        for j in range(i + 1, n):
            if P[i][i] == P[i][j] == P[j][j]:
                P[i][i] = 0
    table = [[Fraction(v, den) for v in row] for row in P]
    return PartialBMetricSpace(tuple(range(n)), table)


@st.composite
def spaces_with_maps(draw, **kw):
    space = draw(finite_spaces(**kw))
    pts = space.points
    images = draw(st.lists(st.sampled_from(pts), min_size=len(pts), max_size=len(pts)))
    return space, SelfMap(table=dict(zip(pts, images)))
