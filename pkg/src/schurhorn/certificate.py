"""Dual certificates of optimality for the relaxation, and evaluation of the
recovery probability bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .graphs import Graph
from .invariants import (Eigenspace, SingularMinorError, comb_width, coherence,
                         kruskal_rank, q_omega, zeta)
from .spectral import eig_sym, eigengap, is_strictly_spectrally_comonotone


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class DualCertificate:
    m11: np.ndarray
    m12: np.ndarray
    m22: np.ndarray
    eigenspace: Eigenspace

    @property
    def k(self) -> int:
        return self.m11.shape[0]

    @property
    def n(self) -> int:
        return self.k + self.m22.shape[0]

    def assemble(self) -> np.ndarray:
        top = np.hstack([self.m11, self.m12])
        bottom = np.hstack([self.m12.T, self.m22])
        return np.vstack([top, bottom])


def leading_block_view(instance) -> np.ndarray:
    """Adjacency of the observed graph relabeled so that the planted copy
    occupies the leading principal block in the planted graph's own
    labeling."""
    n = instance.observed.n
    k = instance.planted.n
    new_label = {}
    for t, v in enumerate(instance.hidden_set):
        new_label[v] = instance.hidden_perm[t]
    nxt = k
    for v in range(n):
        if v not in new_label:
            new_label[v] = nxt
            nxt += 1
    a = instance.observed.adjacency()
    order = sorted(range(n), key=lambda v: new_label[v])
    return a[np.ix_(order, order)]


def eigenspace_of(planted: Graph, lambda_e: float, tol: float = 1e-6) -> Eigenspace:
    """Eigenspace of the planted adjacency for the eigenvalue nearest
    lambda_e."""
    dec = eig_sym(planted.adjacency())
    proj = dec.projector_for(lambda_e, tol)
    i = int(np.argmin(np.abs(dec.distinct_values - lambda_e)))
    return Eigenspace(proj, float(dec.distinct_values[i]))


def build_certificate(instance, e: Eigenspace) -> DualCertificate:
    """Construct the dual certificate: the planted adjacency in the leading
    block, minimum-norm completions in the off-diagonal block, and the
    centered noise matrix in the trailing block.

    Raises SingularMinorError when some noise column touches more planted
    vertices than the eigenspace's Kruskal rank supports (the failure mode
    of the construction).
    """
    a = leading_block_view(instance)
    k = instance.planted.n
    n = instance.observed.n
    p = instance.p
    m11 = instance.planted.adjacency()
    m12 = np.zeros((k, n - k))
    for j in range(n - k):
        omega = np.nonzero(a[:k, k + j] == 1.0)[0]
        if len(omega):
            m12[:, j] = q_omega(e, omega)
    off = -p / (1.0 - p)
    m22 = np.where(a[k:, k:] == 1.0, 1.0, off)
    np.fill_diagonal(m22, 0.0)
    return DualCertificate(m11, m12, m22, e)


def verify_certificate(cert: DualCertificate, instance, gamma: float,
                       margin: float | None = None, tol: float = 1e-8) -> dict:
    """Check the five optimality conditions plus an end-to-end strict
    comonotonicity test of the assembled certificate against the shifted
    planted matrix padded to full size."""
    e = cert.eigenspace
    if abs(gamma - e.lambda_e) > 1e-9 * max(1.0, abs(e.lambda_e)):
        raise CertificateError(
            f"gamma={gamma} must equal the certified eigenvalue {e.lambda_e}")
    m = cert.assemble()
    if margin is None:
        margin = 1e-6 * np.linalg.norm(m, 2)
    a = leading_block_view(instance)
    k = cert.k

    # (i) exact agreement on edges and the diagonal.
    fixed = (a == 1.0) | np.eye(len(a), dtype=bool)
    cond_i = bool(np.all(np.abs(m[fixed] - a[fixed]) <= tol))

    a_plant = instance.planted.adjacency()
    cond_ii = is_strictly_spectrally_comonotone(cert.m11, a_plant, margin)

    basis = e.basis()
    restricted = np.linalg.eigvalsh(basis.T @ cert.m11 @ basis)
    cond_iii = bool(restricted[-1] >= e.lambda_e - tol
                    and restricted[0] <= e.lambda_e + tol)

    resid = (np.eye(k) - e.projector) @ cert.m12
    cond_iv = bool(np.linalg.norm(resid, "fro") <= tol * max(1.0, k))

    dec = eig_sym(cert.m11)
    e_index = int(np.argmin(np.abs(dec.distinct_values - e.lambda_e)))
    gap = eigengap(dec, e_index)
    norm12 = float(np.linalg.norm(cert.m12, 2)) if cert.m12.size else 0.0
    norm22 = float(np.linalg.norm(cert.m22, 2)) if cert.m22.size else 0.0
    cond_v = bool(gap > norm12 + norm22 + abs(e.lambda_e) + margin)

    shifted = np.zeros_like(m)
    shifted[:k, :k] = a_plant - e.lambda_e * np.eye(k)
    end_to_end = is_strictly_spectrally_comonotone(m, shifted, margin)

    overall = cond_i and cond_ii and cond_iii and cond_iv and cond_v and end_to_end
    return {
        "i_entry_equality": cond_i,
        "ii_strict_comonotone": cond_ii,
        "iii_restriction_brackets": cond_iii,
        "iv_columns_in_eigenspace": cond_iv,
        "v_eigengap_dominates": cond_v,
        "end_to_end_comonotone": end_to_end,
        "overall": overall,
        "eigengap": gap,
        "norm_m12": norm12,
        "norm_m22": norm22,
        "lambda_E": e.lambda_e,
        "margin": margin,
    }


@dataclass(frozen=True)
class BoundReport:
    n_threshold: float
    p1: float
    p2: float
    ell: int
    c1: float
    c2: float
    zeta: float
    omega: float
    eigengap: float
    lambda_E: float
    dim_E: int
    sigma_tilde: float
    sigma_star: float
    hypothesis_satisfied: bool
    clamped: bool
    n_threshold_stderr: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def _evaluate_bounds(k: int, n: int, p: float, ell: int, c2: float,
                     gap: float, lambda_e: float, dim_e: int,
                     zeta_val: float, omega_val: float,
                     omega_stderr: float = 0.0) -> BoundReport:
    c1 = math.sqrt(9.0 * p / (1.0 - p))
    delta_sq = gap * gap / 4.0

    # Width term of the n-threshold; vacuous at omega = 0.
    thr_width = delta_sq / omega_val if omega_val > 0 else float("inf")
    thr_noise = ((gap - 2 * abs(lambda_e)) ** 2 / (4 * c1 * c1)
                 if c1 > 0 else float("inf"))
    n_threshold = min(thr_width, thr_noise) + k
    stderr = 0.0
    if omega_stderr > 0 and omega_val > 0 and thr_width <= thr_noise:
        stderr = delta_sq / omega_val ** 2 * omega_stderr

    hypothesis = (k * p < ell) and (n < n_threshold)

    clamped = False
    if ell > k * p:
        tail = math.exp(-(ell - k * p) ** 2 / (ell + k * p))
        feasibility = (1.0 - tail) ** (n - k)
    else:
        feasibility = 0.0
    num = 3.0 * zeta_val * (delta_sq - (n - k) * omega_val) ** 2
    den = 4.0 * ell * (delta_sq + 2.0 * (n - k) * omega_val)
    spectral = 1.0 - 2.0 * k * math.exp(-num / den) if den > 0 else 0.0
    if spectral < 0:
        spectral = 0.0
        clamped = True
    p1 = 1.0 - feasibility * spectral
    if not 0.0 <= p1 <= 1.0:
        clamped = True
        p1 = min(max(p1, 0.0), 1.0)

    arg = gap / 2.0 - abs(lambda_e) - c1 * math.sqrt(max(n - k, 0))
    p2 = (n - k) * math.exp(-c2 * arg * arg)
    if p2 > 1.0:
        clamped = True
        p2 = 1.0

    sigma_tilde = math.sqrt(max(n - k - 1, 0) * p / (1.0 - p))
    sigma_star = max(1.0, p / (1.0 - p))
    return BoundReport(n_threshold, p1, p2, ell, c1, c2, zeta_val, omega_val,
                       gap, lambda_e, dim_e, sigma_tilde, sigma_star,
                       hypothesis, clamped, stderr)


def _gap_for(e: Eigenspace, planted: Graph) -> float:
    dec = eig_sym(planted.adjacency())
    i = int(np.argmin(np.abs(dec.distinct_values - e.lambda_e)))
    return eigengap(dec, i)


def theorem_bounds(planted: Graph, e: Eigenspace, n: int, p: float, ell: int,
                   c2: float = 1.0, mode: str = "exact",
                   samples: int = 10_000, seed: int = 0) -> BoundReport:
    """Evaluate the recovery-probability bound with computed invariants."""
    if not 0 <= p < 1:
        raise CertificateError(f"p must lie in [0,1), got {p}")
    if c2 <= 0:
        raise CertificateError(f"c2 must be positive, got {c2}")
    krank, _ = kruskal_rank(e, cap=ell)
    if ell > krank:
        raise CertificateError(
            f"ell={ell} exceeds the Kruskal rank lower bound {krank}")
    gap = _gap_for(e, planted)
    zeta_val = zeta(e, ell)
    w = comb_width(e, ell, p, mode=mode, samples=samples, seed=seed)
    return _evaluate_bounds(planted.n, n, p, ell, c2, gap, e.lambda_e, e.dim,
                            zeta_val, w.value, w.std_error)


def corollary_bounds(planted: Graph, e: Eigenspace, n: int, p: float,
                     c2: float = 1.0) -> BoundReport:
    """Closed-form variant for connected symmetric graphs with symmetric
    complements: coherence-based substitutes for zeta and the width, with
    the default choice of ell.  Symmetry of the graph is asserted by the
    caller, not verified."""
    if not 0 <= p < 1:
        raise CertificateError(f"p must lie in [0,1), got {p}")
    mu = coherence(e)
    k = planted.n
    if p >= 1.0 / (mu * k):
        raise CertificateError(
            f"p={p} outside the corollary range [0, {1.0 / (mu * k):.4g})")
    ell = math.ceil(0.5 * (k * p + 1.0 / mu))
    gap = _gap_for(e, planted)
    zeta_sub = e.dim / (2.0 * k) * (1.0 - k * p * mu)
    omega_sub = (4.0 * k * k * p / (e.dim ** 2 * (1.0 - k * p * mu))
                 if p > 0 else 0.0)
    return _evaluate_bounds(k, n, p, ell, c2, gap, e.lambda_e, e.dim,
                            zeta_sub, omega_sub)
