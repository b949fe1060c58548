"""Graph container, generators, and edge-list I/O."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import schurhorn as sh
from schurhorn.graphs import (FAMILIES, Graph, GraphError, GraphParseError,
                              MAX_VERTICES, parse_graph_lines)
from oracles import common_neighbor_counts

# (constructor args, n, m, regular degree) for every generator family.
FAMILY_COUNTS = [
    ("clique", (6,), 6, 15, 5),
    ("triangular", (8,), 28, 168, 12),
    ("triangular", (9,), 36, 252, 14),
    ("kneser", (6, 2), 15, 45, 6),
    ("paley", (13,), 13, 39, 6),
    ("clebsch", (), 16, 40, 5),
    ("gq24", (), 27, 135, 10),
    ("hamming", (2, 3), 9, 18, 4),
    ("hypercube", (4,), 16, 32, 4),
]

# Strongly-regular parameters (n, degree, lambda, mu).
SRG_PARAMS = [
    ("clebsch", (), (16, 5, 0, 2)),
    ("gq24", (), (27, 10, 1, 5)),
    ("triangular", (8,), (28, 12, 6, 4)),
    ("kneser", (6, 2), (15, 6, 1, 3)),
    ("paley", (13,), (13, 6, 2, 3)),
]


@pytest.mark.parametrize("family,args,n,m,deg", FAMILY_COUNTS)
def test_family_counts(family, args, n, m, deg):
    g = FAMILIES[family](*args)
    assert g.n == n
    assert g.m == m
    assert np.all(g.degrees() == deg)


@pytest.mark.parametrize("family,args,params", SRG_PARAMS)
def test_strongly_regular_parameters(family, args, params):
    g = FAMILIES[family](*args)
    n, deg, lam, mu = params
    assert g.n == n
    adj = g.adjacency()
    assert np.all(adj.sum(axis=0) == deg)
    lam_set, mu_set = common_neighbor_counts(adj)
    assert lam_set == {lam}
    assert mu_set == {mu}


def test_clique_adjacency():
    a = sh.gen_clique(4).adjacency()
    assert np.array_equal(a, np.ones((4, 4)) - np.eye(4))


def test_adjacency_symmetric_zero_diagonal():
    for family, args, *_ in FAMILY_COUNTS:
        a = FAMILIES[family](*args).adjacency()
        assert np.array_equal(a, a.T)
        assert np.all(np.diag(a) == 0)


def test_graph_validation():
    with pytest.raises(GraphError):
        Graph(-1)
    with pytest.raises(GraphError):
        Graph(3, frozenset({(0, 0)}))
    with pytest.raises(GraphError):
        Graph(3, frozenset({(0, 5)}))
    # Edge normalization: (2, 0) and (0, 2) are the same edge.
    assert Graph(3, frozenset({(2, 0)})).has_edge(0, 2)


def test_generator_parameter_errors():
    with pytest.raises(GraphError):
        sh.gen_clique(0)
    with pytest.raises(GraphError):
        sh.gen_triangular(2)
    with pytest.raises(GraphError):
        sh.gen_kneser(3, 2)
    with pytest.raises(GraphError):
        sh.gen_paley(10)  # not prime
    with pytest.raises(GraphError):
        sh.gen_paley(7)  # prime but 3 mod 4
    with pytest.raises(GraphError):
        sh.gen_paley(9)  # prime power unsupported
    with pytest.raises(GraphError):
        sh.gen_hamming(0, 2)
    with pytest.raises(GraphError):
        sh.gen_clique(MAX_VERTICES + 1)


def test_complement_involution_and_counts():
    g = sh.gen_paley(13)
    gc = sh.complement(g)
    assert gc.m == 13 * 12 // 2 - g.m
    assert sh.complement(gc) == g
    # Paley graphs are self-complementary.
    assert sorted(gc.degrees()) == sorted(g.degrees())


def test_relabel_and_induced():
    g = sh.gen_clique(3)
    h = g.relabel([2, 0, 1])
    assert h == g  # cliques are label-invariant
    with pytest.raises(GraphError):
        g.relabel([0, 0, 1])
    path = Graph(4, frozenset({(0, 1), (1, 2), (2, 3)}))
    sub = path.induced([1, 2, 3])
    assert sub == Graph(3, frozenset({(0, 1), (1, 2)}))
    with pytest.raises(GraphError):
        path.induced([1, 1])


def test_save_load_roundtrip(tmp_path):
    g = sh.gen_clebsch()
    path = tmp_path / "clebsch.txt"
    sh.save_graph(g, path)
    assert sh.load_graph(path) == g
    first = path.read_text().splitlines()[0]
    assert first == "16 40"


def test_parse_comments_and_blank_lines():
    g = parse_graph_lines([
        "# a comment\n", "\n", "3 2  # header\n", "0 1\n", "1 2 # edge\n"])
    assert g == Graph(3, frozenset({(0, 1), (1, 2)}))


@pytest.mark.parametrize("lines,bad_line", [
    (["3 1\n", "0 1\n", "0 1\n"], 3),          # duplicate edge
    (["3 1\n", "1 0\n"], 2),                   # i >= j
    (["3 1\n", "0 5\n"], 2),                   # out of range
    (["3 x\n"], 1),                            # non-integer
    (["3 2\n", "0 1\n"], 1),                   # edge-count mismatch
    (["3\n"], 1),                              # malformed header
    ([], 1),                                   # empty file
])
def test_parse_errors_carry_line_numbers(lines, bad_line):
    with pytest.raises(GraphParseError) as exc:
        parse_graph_lines(lines)
    assert exc.value.line_no == bad_line


@st.composite
def small_graphs(draw):
    n = draw(st.integers(min_value=1, max_value=12))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.sets(st.sampled_from(pairs)) if pairs else st.just(set()))
    return Graph(n, frozenset(edges))


@settings(max_examples=50, deadline=None)
@given(small_graphs())
def test_io_roundtrip_property(tmp_path_factory, g):
    path = tmp_path_factory.mktemp("io") / "g.txt"
    sh.save_graph(g, path)
    assert sh.load_graph(path) == g


@settings(max_examples=50, deadline=None)
@given(small_graphs(), st.randoms(use_true_random=False))
def test_relabel_preserves_spectrum(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = g.relabel(perm)
    assert h.m == g.m
    assert np.allclose(np.linalg.eigvalsh(h.adjacency()),
                       np.linalg.eigvalsh(g.adjacency()), atol=1e-9)
