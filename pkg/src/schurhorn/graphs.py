"""Undirected graph container and generators for the graph families used here.

All graphs are simple: unweighted, loopless, undirected, with vertices
labeled 0..n-1.  Generator labelings are fixed (lexicographic subsets,
row-major tuples, bitstring order) so that downstream results are
deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

# Dense spectral work downstream is O(n^3); refuse to build graphs that
# would make it intractable.
MAX_VERTICES = 2000


class GraphError(ValueError):
    """Invalid graph parameter or malformed graph data."""


class GraphParseError(GraphError):
    """Malformed edge-list file; carries the offending line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"vertex count must be nonnegative, got {self.n}")
        object.__setattr__(self, "edges", frozenset(
            self._normalize(e) for e in self.edges))
        for i, j in self.edges:
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise GraphError(f"edge ({i},{j}) out of range [0,{self.n})")

    @staticmethod
    def _normalize(e) -> tuple[int, int]:
        i, j = e
        return (int(i), int(j)) if i < j else (int(j), int(i))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return self._normalize((i, j)) in self.edges

    def adjacency(self) -> np.ndarray:
        """Dense symmetric 0/1 adjacency matrix with zero diagonal."""
        a = np.zeros((self.n, self.n))
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1.0
        return a

    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n, dtype=int)
        for i, j in self.edges:
            d[i] += 1
            d[j] += 1
        return d

    def relabel(self, perm: list[int]) -> "Graph":
        """Return the graph with vertex i renamed perm[i]."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("perm is not a permutation of the vertex set")
        return Graph(self.n, frozenset(
            (perm[i], perm[j]) for i, j in self.edges))

    def induced(self, vertices: list[int]) -> "Graph":
        """Induced subgraph on the given vertices, relabeled 0..len-1."""
        idx = {v: t for t, v in enumerate(vertices)}
        if len(idx) != len(vertices):
            raise GraphError("duplicate vertices in induced-subgraph request")
        return Graph(len(vertices), frozenset(
            (idx[i], idx[j]) for i, j in self.edges
            if i in idx and j in idx))


def _check_size(n: int):
    if n > MAX_VERTICES:
        raise GraphError(
            f"graph on {n} vertices exceeds the size guard ({MAX_VERTICES})")


def gen_clique(k: int) -> Graph:
    """Complete graph on k vertices."""
    if k < 1:
        raise GraphError(f"clique size must be >= 1, got {k}")
    _check_size(k)
    return Graph(k, frozenset(itertools.combinations(range(k), 2)))


def gen_triangular(m: int) -> Graph:
    """Triangular graph T_m: 2-subsets of {0..m-1}, adjacent iff they meet.

    Vertices are the 2-subsets in lexicographic order.
    """
    if m < 3:
        raise GraphError(f"triangular graph needs m >= 3, got {m}")
    subsets = list(itertools.combinations(range(m), 2))
    _check_size(len(subsets))
    edges = set()
    for u, v in itertools.combinations(range(len(subsets)), 2):
        if set(subsets[u]) & set(subsets[v]):
            edges.add((u, v))
    return Graph(len(subsets), frozenset(edges))


def gen_kneser(m: int, l: int) -> Graph:
    """Kneser graph K(m,l): l-subsets of {0..m-1}, adjacent iff disjoint.

    Vertices are the l-subsets in lexicographic order.
    """
    if l < 1 or m < 2 * l:
        raise GraphError(f"Kneser graph needs m >= 2l >= 2, got m={m}, l={l}")
    subsets = list(itertools.combinations(range(m), l))
    _check_size(len(subsets))
    edges = set()
    for u, v in itertools.combinations(range(len(subsets)), 2):
        if not set(subsets[u]) & set(subsets[v]):
            edges.add((u, v))
    return Graph(len(subsets), frozenset(edges))


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    for d in range(2, int(q ** 0.5) + 1):
        if q % d == 0:
            return False
    return True


def gen_paley(q: int) -> Graph:
    """Paley graph on a prime q = 1 (mod 4): i ~ j iff i-j is a QR mod q.

    Prime powers are not supported (no extension-field arithmetic).
    """
    if not _is_prime(q) or q % 4 != 1:
        raise GraphError(
            f"Paley graph needs a prime q = 1 (mod 4), got {q}")
    _check_size(q)
    residues = {(x * x) % q for x in range(1, q)}
    edges = frozenset(
        (i, j) for i, j in itertools.combinations(range(q), 2)
        if (j - i) % q in residues)
    return Graph(q, edges)


def gen_clebsch() -> Graph:
    """Clebsch graph: 4-bit strings, adjacent iff XOR has weight 1 or 4."""
    edges = set()
    for u, v in itertools.combinations(range(16), 2):
        w = bin(u ^ v).count("1")
        if w in (1, 4):
            edges.add((u, v))
    return Graph(16, frozenset(edges))


def gen_gq24() -> Graph:
    """Generalized quadrangle-(2,4) graph on 27 vertices.

    The intersection graph of the 27 lines on a cubic surface in the
    Schlafli labeling: e_1..e_6, g_1..g_6, f_{ij} for i<j, with
    e_i ~ g_j iff i != j, e_i ~ f_{jk} and g_i ~ f_{jk} iff i in {j,k},
    and f_{ij} ~ f_{kl} iff the index pairs are disjoint.
    """
    e = list(range(6))                      # e_i -> vertex i
    g = list(range(6, 12))                  # g_i -> vertex 6+i
    pairs = list(itertools.combinations(range(6), 2))
    f = {pq: 12 + t for t, pq in enumerate(pairs)}   # f_{ij} lexicographic
    edges = set()
    for i in range(6):
        for j in range(6):
            if i != j:
                edges.add((e[i], g[j]))
    for i in range(6):
        for (a, b), fv in f.items():
            if i in (a, b):
                edges.add((e[i], fv))
                edges.add((g[i], fv))
    for pq, fu in f.items():
        for rs, fv in f.items():
            if fu < fv and not set(pq) & set(rs):
                edges.add((fu, fv))
    return Graph(27, frozenset(edges))


def gen_hamming(d: int, q: int) -> Graph:
    """Hamming graph H(d,q): q^d tuples, adjacent iff Hamming distance 1.

    Vertices are d-tuples over {0..q-1} in row-major order.
    """
    if d < 1 or q < 2:
        raise GraphError(f"Hamming graph needs d >= 1, q >= 2, got ({d},{q})")
    n = q ** d
    _check_size(n)
    edges = set()
    for v in range(n):
        digits = []
        x = v
        for _ in range(d):
            digits.append(x % q)
            x //= q
        for pos in range(d):
            step = q ** pos
            for c in range(q):
                if c != digits[pos]:
                    u = v + (c - digits[pos]) * step
                    if v < u:
                        edges.add((v, u))
    return Graph(n, frozenset(edges))


def gen_hypercube(d: int) -> Graph:
    """d-dimensional hypercube, H(d,2)."""
    return gen_hamming(d, 2)


def complement(g: Graph) -> Graph:
    """Complement over all unordered vertex pairs."""
    all_pairs = set(itertools.combinations(range(g.n), 2))
    return Graph(g.n, frozenset(all_pairs - set(g.edges)))


def save_graph(g: Graph, path) -> None:
    """Write the edge-list format: 'n m' then one 'i j' line per edge."""
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for i, j in sorted(g.edges):
            fh.write(f"{i} {j}\n")


def parse_graph_lines(lines) -> Graph:
    """Parse edge-list lines (header 'n m', then 'i j'); '#' starts a comment."""
    header = None
    edges = []
    n_expected = m_expected = 0
    for line_no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(f"expected two integers, got {raw!r}", line_no)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"non-integer token in {raw!r}", line_no)
        if header is None:
            header = line_no
            n_expected, m_expected = a, b
            if n_expected < 0 or m_expected < 0:
                raise GraphParseError("negative header values", line_no)
            continue
        if not (0 <= a < b < n_expected):
            raise GraphParseError(
                f"edge ({a},{b}) violates 0 <= i < j < n={n_expected}", line_no)
        if (a, b) in edges:
            raise GraphParseError(f"duplicate edge ({a},{b})", line_no)
        edges.append((a, b))
    if header is None:
        raise GraphParseError("empty file", 1)
    if len(edges) != m_expected:
        raise GraphParseError(
            f"header promised {m_expected} edges, found {len(edges)}", header)
    return Graph(n_expected, frozenset(edges))


def load_graph(path) -> Graph:
    """Load a graph from the edge-list format written by save_graph."""
    with open(path) as fh:
        return parse_graph_lines(fh)


FAMILIES = {
    "clique": gen_clique,
    "triangular": gen_triangular,
    "kneser": gen_kneser,
    "paley": gen_paley,
    "clebsch": gen_clebsch,
    "gq24": gen_gq24,
    "hamming": gen_hamming,
    "hypercube": gen_hypercube,
}
