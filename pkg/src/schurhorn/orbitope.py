"""Geometry of the Schur-Horn orbitope: membership via majorization,
Euclidean projection, linear maximization, and SDPA export of the lifted
semidefinite description."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph
from .spectral import DEFAULT_GROUP_TOL, check_symmetric, eig_sym


class OrbitopeError(ValueError):
    pass


@dataclass(frozen=True)
class OrbitopeSpec:
    """Target spectrum (sorted descending, with repeats) in ambient dim n."""

    n: int
    spectrum: np.ndarray
    group_tol: float = DEFAULT_GROUP_TOL

    def __post_init__(self):
        s = np.asarray(self.spectrum, dtype=float)
        if s.ndim != 1 or len(s) != self.n:
            raise OrbitopeError(f"spectrum must have length n={self.n}")
        if np.any(np.diff(s) > 1e-12):
            raise OrbitopeError("spectrum must be sorted descending")
        object.__setattr__(self, "spectrum", s)

    @property
    def trace(self) -> float:
        return float(self.spectrum.sum())

    def distinct(self) -> tuple[np.ndarray, np.ndarray]:
        """(distinct values desc, multiplicities), grouped at group_tol."""
        scale = max(1.0, np.abs(self.spectrum).max(initial=0.0))
        vals: list[float] = []
        mults: list[int] = []
        for x in self.spectrum:
            if vals and vals[-1] - x <= self.group_tol * scale:
                total = vals[-1] * mults[-1] + x
                mults[-1] += 1
                vals[-1] = total / mults[-1]
            else:
                vals.append(float(x))
                mults.append(1)
        return np.array(vals), np.array(mults, dtype=int)


def make_orbitope(planted: Graph, gamma: float, n: int,
                  group_tol: float = DEFAULT_GROUP_TOL) -> OrbitopeSpec:
    """Orbitope of the planted adjacency matrix shifted by -gamma*I and
    zero-padded to dimension n.

    Shift eigenvalues within group_tol of zero are snapped to zero so they
    merge with the padding zeros (this is what enlarges the zero eigenspace
    when gamma equals an eigenvalue of the planted graph).
    """
    k = planted.n
    if n < k:
        raise OrbitopeError(f"ambient dimension n={n} below planted size k={k}")
    shifted = planted.adjacency() - gamma * np.eye(k)
    dec = eig_sym(shifted, group_tol)
    vals = dec.spectrum()
    scale = max(1.0, np.abs(vals).max(initial=0.0))
    vals = np.where(np.abs(vals) <= group_tol * scale, 0.0, vals)
    spectrum = np.sort(np.concatenate([vals, np.zeros(n - k)]))[::-1]
    return OrbitopeSpec(n, spectrum, group_tol)


def s_ell(a: np.ndarray, l: int) -> float:
    """Sum of the l largest eigenvalues of a symmetric matrix."""
    a = check_symmetric(a)
    if not 1 <= l <= a.shape[0]:
        raise OrbitopeError(f"l={l} out of range [1,{a.shape[0]}]")
    vals = np.linalg.eigvalsh(a)
    return float(vals[-l:].sum())


def contains(orb: OrbitopeSpec, a: np.ndarray, tol: float = 1e-8) -> bool:
    """Membership test via the majorization inequalities: every partial sum
    of the sorted spectrum of a must be dominated, and traces must match."""
    a = check_symmetric(a)
    if a.shape[0] != orb.n:
        raise OrbitopeError(f"dimension mismatch: {a.shape[0]} vs {orb.n}")
    vals = np.sort(np.linalg.eigvalsh(a))[::-1]
    s_a = np.cumsum(vals)
    s_o = np.cumsum(orb.spectrum)
    if abs(s_a[-1] - s_o[-1]) > tol:
        return False
    return bool(np.all(s_a[:-1] <= s_o[:-1] + tol))


def project_spectrum(w: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Euclidean projection of a sorted-descending vector w onto
    {y sorted descending : prefix sums of y <= prefix sums of lam, equal total}.

    The KKT system of this chain-constrained QP is solved exactly by the
    least concave majorant of the cumulative gaps sum(w - lam): the
    projection is w minus the majorant's increments.
    """
    w = np.asarray(w, dtype=float)
    lam = np.asarray(lam, dtype=float)
    if w.shape != lam.shape or w.ndim != 1:
        raise OrbitopeError("w and lam must be 1-d vectors of equal length")
    if np.any(np.diff(w) > 1e-12) or np.any(np.diff(lam) > 1e-12):
        raise OrbitopeError("inputs must be sorted descending")
    n = len(w)
    c = np.concatenate([[0.0], np.cumsum(w - lam)])   # c[j], j = 0..n
    # Upper convex hull of the points (j, c[j]): Graham scan.
    hull = [0]
    for j in range(1, n + 1):
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            # Keep (i0, i1, j) iff i1 lies strictly above chord (i0, j).
            if (c[i1] - c[i0]) * (j - i1) <= (c[j] - c[i1]) * (i1 - i0):
                hull.pop()
            else:
                break
        hull.append(j)
    sigma = np.empty(n)
    for a, b in zip(hull, hull[1:]):
        sigma[a:b] = (c[b] - c[a]) / (b - a)
    return w - sigma


def project_orbitope(orb: OrbitopeSpec, x: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the orbitope: project the spectrum in the
    eigenbasis of x (Von Neumann alignment)."""
    x = check_symmetric(x)
    if x.shape[0] != orb.n:
        raise OrbitopeError(f"dimension mismatch: {x.shape[0]} vs {orb.n}")
    vals, vecs = np.linalg.eigh(x)
    vals = vals[::-1]
    vecs = vecs[:, ::-1]
    y = project_spectrum(vals, orb.spectrum)
    return (vecs * y) @ vecs.T


def linmax_orbitope(orb: OrbitopeSpec, c: np.ndarray) -> tuple[float, np.ndarray]:
    """Maximize <c, .> over the orbitope.

    The maximum is the inner product of the sorted spectra, attained by
    aligning the target spectrum with the eigenbasis of c.
    """
    c = check_symmetric(c)
    if c.shape[0] != orb.n:
        raise OrbitopeError(f"dimension mismatch: {c.shape[0]} vs {orb.n}")
    vals, vecs = np.linalg.eigh(c)
    vals = vals[::-1]
    vecs = vecs[:, ::-1]
    value = float(vals @ orb.spectrum)
    argmax = (vecs * orb.spectrum) @ vecs.T
    return value, argmax


def _fmt(x: float) -> str:
    return format(x, ".17g")


def export_sdpa(instance, gamma: float, path) -> None:
    """Write the lifted semidefinite description of the relaxation in SDPA
    sparse (.dat-s) format.

    Decision variable: one PSD block Y_i of size n per distinct eigenvalue
    lambda_i (multiplicity m_i) of the shifted planted spectrum.  The matrix
    variable of the relaxation is A = sum_i lambda_i Y_i.  Constraints:
    sum_i Y_i = I (entrywise, n(n+1)/2 rows), trace(Y_i) = m_i (q rows), and
    A_{u,v} = 0 at each non-edge u < v of the observed graph.  Objective:
    trace(A * A_obs).
    """
    observed: Graph = instance.observed
    planted: Graph = instance.planted
    n = observed.n
    orb = make_orbitope(planted, gamma, n)
    lams, mults = orb.distinct()
    q = len(lams)
    a_obs = observed.adjacency()
    nonedges = [(u, v) for u in range(n) for v in range(u + 1, n)
                if a_obs[u, v] == 0.0]
    n_cons = n * (n + 1) // 2 + q + len(nonedges)

    rhs: list[float] = []
    # entries[j] holds (block, i, j, value) rows of constraint matrix j;
    # index 0 is the objective matrix.
    entries: list[list[tuple[int, int, int, float]]] = [[] for _ in range(n_cons + 1)]

    for blk in range(q):
        if lams[blk] == 0.0:
            continue
        for u, v in sorted(observed.edges):
            entries[0].append((blk + 1, u + 1, v + 1, float(lams[blk])))

    con = 1
    for u in range(n):
        for v in range(u, n):
            for blk in range(q):
                entries[con].append((blk + 1, u + 1, v + 1, 1.0))
            rhs.append(1.0 if u == v else 0.0)
            con += 1
    for blk in range(q):
        for u in range(n):
            entries[con].append((blk + 1, u + 1, u + 1, 1.0))
        rhs.append(float(mults[blk]))
        con += 1
    for u, v in nonedges:
        for blk in range(q):
            if lams[blk] != 0.0:
                entries[con].append((blk + 1, u + 1, v + 1, float(lams[blk])))
        rhs.append(0.0)
        con += 1

    with open(path, "w") as fh:
        fh.write(f"{n_cons}\n{q}\n")
        fh.write(" ".join(str(n) for _ in range(q)) + "\n")
        fh.write(" ".join(_fmt(r) for r in rhs) + "\n")
        for matno, rows in enumerate(entries):
            for blk, i, j, val in rows:
                fh.write(f"{matno} {blk} {i} {j} {_fmt(val)}\n")


def parse_sdpa(path):
    """Reference parser for the sparse SDPA format written by export_sdpa.

    Returns (n_constraints, block_sizes, rhs, entries) where entries is a
    list of (matno, blockno, i, j, value) tuples (1-based indices).
    """
    with open(path) as fh:
        lines = [ln for ln in (l.split("*")[0].strip() for l in fh) if ln]
    n_cons = int(lines[0])
    n_blocks = int(lines[1])
    sizes = [int(x) for x in lines[2].split()]
    if len(sizes) != n_blocks:
        raise OrbitopeError("block-size line does not match block count")
    rhs = [float(x) for x in lines[3].split()]
    if len(rhs) != n_cons:
        raise OrbitopeError("RHS length does not match constraint count")
    entries = []
    for ln in lines[4:]:
        mat, blk, i, j, val = ln.split()
        entries.append((int(mat), int(blk), int(i), int(j), float(val)))
    return n_cons, sizes, rhs, entries
