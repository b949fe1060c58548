"""Eigenspace invariants: coherence, Kruskal rank, minimum minor eigenvalue,
minimum-norm completions, and the combinatorial width."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .spectral import check_symmetric

EXACT_WIDTH_BUDGET = 5_000_000
ZETA_BUDGET = 5_000_000
MC_RESAMPLE_CAP = 100


class InvariantError(ValueError):
    pass


class DegenerateEigenspaceError(InvariantError):
    """Coherence is undefined when a diagonal projector entry vanishes."""


class SingularMinorError(InvariantError):
    pass


class BudgetError(InvariantError):
    pass


@dataclass(frozen=True)
class Eigenspace:
    """An eigenspace of a k x k symmetric matrix, given by its projector."""

    projector: np.ndarray
    lambda_e: float

    def __post_init__(self):
        p = check_symmetric(self.projector, "projector")
        if np.linalg.norm(p @ p - p, "fro") > 1e-8 * p.shape[0]:
            raise InvariantError("matrix is not an orthogonal projector")
        object.__setattr__(self, "projector", p)

    @property
    def k(self) -> int:
        return self.projector.shape[0]

    @property
    def dim(self) -> int:
        return int(round(np.trace(self.projector)))

    def basis(self) -> np.ndarray:
        """Orthonormal basis (k x dim) of the eigenspace."""
        vals, vecs = np.linalg.eigh(self.projector)
        return vecs[:, vals > 0.5]

    def singularity_tol(self) -> float:
        # Scaled to the diagonal value dim/k of transitive projectors.
        return 1e-9 * self.dim / self.k


@dataclass(frozen=True)
class WidthEstimate:
    value: float
    std_error: float
    samples: int
    ell: int
    p: float
    exact: bool


def coherence(e: Eigenspace) -> float:
    """Maximum normalized off-diagonal projector entry, in (0, 1]."""
    p = e.projector
    d = np.diag(p)
    if np.any(d <= 1e-12):
        raise DegenerateEigenspaceError(
            "projector has a (near-)zero diagonal entry; coherence undefined")
    denom = np.sqrt(np.outer(d, d))
    ratios = np.abs(p) / denom
    np.fill_diagonal(ratios, 0.0)
    return float(ratios.max())


def _iter_index_chunks(k: int, m: int, chunk: int = 100_000):
    """Yield (chunk, m) int arrays enumerating m-subsets of range(k)."""
    it = itertools.combinations(range(k), m)
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.intp)


def _all_minors_nonsingular(p: np.ndarray, m: int, tol: float) -> bool:
    for idx in _iter_index_chunks(p.shape[0], m):
        minors = p[idx[:, :, None], idx[:, None, :]]
        if m == 1:
            if np.any(minors[:, 0, 0] <= tol):
                return False
            continue
        vals = np.linalg.eigvalsh(minors)
        if np.any(vals[:, 0] <= tol):
            return False
    return True


def kruskal_rank(e: Eigenspace, cap: int | None = None) -> tuple[int, bool]:
    """Largest m <= cap with every m x m principal minor of the projector
    nonsingular.

    Returns (m, exact).  exact is False only when the search stopped at the
    cap without witnessing a singular (m+1)-minor; the result is then a
    lower bound.  Singularity of principal minors of a PSD matrix is
    monotone in the subset, so only size-m minors need checking at level m.
    """
    p = e.projector
    k, dim = e.k, e.dim
    tol = e.singularity_tol()
    limit = dim if cap is None else min(cap, k)
    m = 0
    while m < limit:
        if not _all_minors_nonsingular(p, m + 1, tol):
            return m, True
        m += 1
    if m >= dim:
        # krank <= dim always: any (dim+1)-minor of a rank-dim projector
        # is singular.
        return dim, True
    if cap is not None and m == cap < k:
        # Probe one level beyond the cap for an early singular witness.
        if not _all_minors_nonsingular(p, m + 1, tol):
            return m, True
        return m, False
    return m, True


def zeta(e: Eigenspace, ell: int) -> float:
    """Exact minimum over all |Omega| <= ell of the smallest eigenvalue of
    the corresponding principal minor of the projector."""
    if ell < 1 or ell > e.k:
        raise InvariantError(f"ell={ell} out of range [1,{e.k}]")
    total = sum(math.comb(e.k, i) for i in range(1, ell + 1))
    if total > ZETA_BUDGET:
        raise BudgetError(
            f"{total} minors exceed the enumeration budget {ZETA_BUDGET}")
    p = e.projector
    best = float("inf")
    for i in range(1, ell + 1):
        for idx in _iter_index_chunks(e.k, i):
            minors = p[idx[:, :, None], idx[:, None, :]]
            if i == 1:
                best = min(best, float(minors[:, 0, 0].min()))
            else:
                vals = np.linalg.eigvalsh(minors)
                best = min(best, float(vals[:, 0].min()))
    return best


def q_omega(e: Eigenspace, omega) -> np.ndarray:
    """Minimum Euclidean-norm vector in the eigenspace equal to 1 on omega.

    Computed as P I_Omega' (P_{Omega,Omega})^{-1} 1.
    """
    omega = sorted(int(i) for i in omega)
    if len(set(omega)) != len(omega):
        raise InvariantError("omega has repeated indices")
    if omega and not (0 <= omega[0] and omega[-1] < e.k):
        raise InvariantError(f"omega indices out of range [0,{e.k})")
    if not omega:
        return np.zeros(e.k)
    p = e.projector
    idx = np.array(omega, dtype=np.intp)
    minor = p[np.ix_(idx, idx)]
    lam_min = float(np.linalg.eigvalsh(minor)[0])
    if lam_min <= e.singularity_tol():
        raise SingularMinorError(
            f"principal minor on {omega} is singular (lambda_min={lam_min:.3e})")
    coeffs = np.linalg.solve(minor, np.ones(len(idx)))
    return p[:, idx] @ coeffs


def default_ell(e: Eigenspace, p: float) -> int:
    """Default support-size parameter ceil((kp + 1/mu)/2)."""
    return math.ceil(0.5 * (e.k * p + 1.0 / coherence(e)))


def _width_exact(e: Eigenspace, ell: int, p: float) -> np.ndarray:
    k = e.k
    total = sum(math.comb(k, i) for i in range(ell + 1))
    if total > EXACT_WIDTH_BUDGET:
        raise BudgetError(
            f"{total} subsets exceed the enumeration budget {EXACT_WIDTH_BUDGET}")
    norm = sum(math.comb(k, i) * p ** i * (1 - p) ** (k - i)
               for i in range(ell + 1))
    sigma = np.zeros((k, k))
    for i in range(1, ell + 1):
        weight = p ** i * (1 - p) ** (k - i) / norm
        acc = np.zeros((k, k))
        for omega in itertools.combinations(range(k), i):
            q = q_omega(e, omega)
            acc += np.outer(q, q)
        sigma += weight * acc
    return sigma


def comb_width(e: Eigenspace, ell: int, p: float, mode: str = "exact",
               samples: int = 10_000, seed: int = 0) -> WidthEstimate:
    """Spectral norm of E[q_Omega q_Omega' | |Omega| <= ell] with Omega
    drawn elementwise Bernoulli(p).

    exact mode enumerates all subsets with the conditional weights;
    montecarlo mode rejection-samples Omega and reports a grouped-jackknife
    standard error.
    """
    if not 0 <= p < 1:
        raise InvariantError(f"p must lie in [0,1), got {p}")
    if ell < 0 or ell > e.k:
        raise InvariantError(f"ell={ell} out of range [0,{e.k}]")
    if p == 0.0 or ell == 0:
        return WidthEstimate(0.0, 0.0, 0, ell, p, True)
    if mode == "exact":
        sigma = _width_exact(e, ell, p)
        return WidthEstimate(float(np.linalg.norm(sigma, 2)), 0.0, 0, ell, p, True)
    if mode != "montecarlo":
        raise InvariantError(f"unknown mode {mode!r}")

    rng = np.random.default_rng(seed)
    k = e.k
    outer_sum = np.zeros((k, k))
    n_groups = min(20, samples)
    group_sums = np.zeros((n_groups, k, k))
    group_counts = np.zeros(n_groups, dtype=int)
    for s in range(samples):
        for attempt in range(MC_RESAMPLE_CAP):
            mask = rng.random(k) < p
            if mask.sum() <= ell:
                break
        else:
            raise InvariantError(
                f"rejection sampling failed {MC_RESAMPLE_CAP} times; "
                f"ell={ell} is too small for p={p}")
        omega = np.nonzero(mask)[0]
        q = q_omega(e, omega) if len(omega) else np.zeros(k)
        oq = np.outer(q, q)
        outer_sum += oq
        g = s % n_groups
        group_sums[g] += oq
        group_counts[g] += 1
    value = float(np.linalg.norm(outer_sum / samples, 2))
    # Grouped jackknife on the spectral norm.
    loo = np.empty(n_groups)
    for g in range(n_groups):
        rest = (outer_sum - group_sums[g]) / (samples - group_counts[g])
        loo[g] = np.linalg.norm(rest, 2)
    se = float(np.sqrt((n_groups - 1) / n_groups * ((loo - loo.mean()) ** 2).sum()))
    return WidthEstimate(value, se, samples, ell, p, False)


def invariants_report(e: Eigenspace, eigengap_value: float, ell: int, p: float,
                      mode: str = "exact", samples: int = 10_000,
                      seed: int = 0, krank_cap: int | None = None) -> dict:
    """Key-value summary of the eigenspace invariants (JSON-friendly)."""
    mu = coherence(e)
    krank, krank_exact = kruskal_rank(e, cap=krank_cap)
    z = zeta(e, min(ell, e.k))
    w = comb_width(e, ell, p, mode=mode, samples=samples, seed=seed)
    return {
        "mu": mu,
        "krank": krank,
        "krank_exact": krank_exact,
        "zeta": z,
        "omega": w.value,
        "std_error": w.std_error,
        "eigengap": eigengap_value,
        "lambda_E": e.lambda_e,
        "dim": e.dim,
    }
