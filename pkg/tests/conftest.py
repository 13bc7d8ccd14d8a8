import random
import re

import pytest

from loopvertex.graphs import Edge, LabeledMultigraph

FAT_TRIANGLE_PAIRS = [(1, 2), (1, 3), (2, 3), (2, 3)]
# 4-cycle l2 l1 l3 l4 with the doubled chord l5, l6
EYE_PAIRS = [(2, 3), (1, 2), (3, 4), (4, 1), (2, 4), (2, 4)]


def fat_triangle_graph():
    return LabeledMultigraph.from_pairs([1, 2, 3], FAT_TRIANGLE_PAIRS)


def eye_graph():
    return LabeledMultigraph.from_pairs([1, 2, 3, 4], EYE_PAIRS)


def bubble_graph():
    return LabeledMultigraph.from_pairs([1, 2], [(1, 2), (1, 2)])


@pytest.fixture
def fat():
    return fat_triangle_graph()


@pytest.fixture
def eye():
    return eye_graph()


@pytest.fixture
def bubble():
    return bubble_graph()


def random_connected_multigraph(rng: random.Random, max_vertices=6, max_edges=8, loop_prob=0.2):
    """Random connected multigraph: a random spanning tree plus extra edges.

    Extra edges may repeat an existing pair or be self-loops.
    """
    nv = rng.randint(1, max_vertices)
    ne = rng.randint(nv - 1, max(nv - 1, max_edges))
    vs = list(range(nv))
    rng.shuffle(vs)
    pairs = [(vs[i], vs[rng.randrange(i)]) for i in range(1, nv)]
    while len(pairs) < ne:
        u = rng.randrange(nv)
        v = u if rng.random() < loop_prob else rng.randrange(nv)
        pairs.append((u, v))
    rng.shuffle(pairs)
    ids = rng.sample(range(1, 50), len(pairs))
    return LabeledMultigraph(tuple(range(nv)), tuple(Edge(i, u, v) for i, (u, v) in zip(ids, pairs)))


def random_graph_suite(n=200, seed=20240601):
    rng = random.Random(seed)
    return [random_connected_multigraph(rng) for _ in range(n)]


# -- acceptance summary --------------------------------------------------

_AC_RESULTS = {}
_AC_NAME = re.compile(r"test_ac(\d+)_")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    m = _AC_NAME.search(report.nodeid)
    if m:
        # parametrized criteria pass only if every case passes
        name = report.nodeid.split("::")[-1].split("[")[0]
        prev = _AC_RESULTS.get(int(m.group(1)), ("passed", name))[0]
        outcome = report.outcome if prev == "passed" else prev
        _AC_RESULTS[int(m.group(1))] = (outcome, name)


def pytest_terminal_summary(terminalreporter):
    if not _AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_AC_RESULTS):
        outcome, name = _AC_RESULTS[k]
        flag = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"AC{k:02d} {flag}  {name}")
