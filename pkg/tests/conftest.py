import pytest

from pcg.fixtures import TABLE_PCG, chair_hierarchy
from pcg.lang.parser import parse_pcg


@pytest.fixture(scope="session")
def table_graph():
    result = parse_pcg(TABLE_PCG)
    assert result.ok, result.diagnostics
    return result.graph


@pytest.fixture(scope="session")
def chair_doc():
    return chair_hierarchy()


@pytest.fixture(scope="session")
def extractor_graphs_100():
    from helpers import random_hierarchy
    from pcg.extract import build_pcg, load_hierarchy

    graphs = [build_pcg(load_hierarchy(chair_hierarchy()))]
    graphs += [
        build_pcg(load_hierarchy(random_hierarchy(3000 + i, rotated=bool(i % 2))))
        for i in range(99)
    ]
    return graphs
