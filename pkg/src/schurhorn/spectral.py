"""Dense symmetric eigen-analysis: grouped decompositions, projectors,
eigengaps, and spectral-comonotonicity tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_GROUP_TOL = 1e-8
DEFAULT_COMMUTE_TOL = 1e-8


class SpectralError(ValueError):
    pass


def check_symmetric(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise SpectralError(f"{name} must be square, got shape {a.shape}")
    if not np.allclose(a, a.T, atol=1e-12 * max(1.0, np.abs(a).max(initial=0.0))):
        raise SpectralError(f"{name} is not symmetric")
    # Upper triangle is authoritative: symmetrize exactly.
    return (a + a.T) / 2.0


@dataclass(frozen=True)
class SpectralDecomposition:
    """Grouped eigendecomposition of a symmetric matrix.

    distinct_values is sorted strictly descending; projectors[i] projects
    onto the eigenspace of distinct_values[i]; basis columns are the
    underlying eigenvectors in the same (descending) order.
    """

    distinct_values: np.ndarray
    multiplicities: np.ndarray
    projectors: list[np.ndarray]
    basis: np.ndarray

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def t(self) -> int:
        return len(self.distinct_values)

    def spectrum(self) -> np.ndarray:
        """Full eigenvalue vector (with repeats), sorted descending."""
        return np.repeat(self.distinct_values, self.multiplicities)

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        for lam, p in zip(self.distinct_values, self.projectors):
            out += lam * p
        return out

    def projector_for(self, value: float, tol: float = 1e-6) -> np.ndarray:
        """Projector of the distinct eigenvalue closest to `value` (within tol)."""
        i = int(np.argmin(np.abs(self.distinct_values - value)))
        if abs(self.distinct_values[i] - value) > tol * max(1.0, abs(value)):
            raise SpectralError(
                f"no eigenvalue near {value}; have {self.distinct_values}")
        return self.projectors[i]


def eig_sym(a: np.ndarray, group_tol: float = DEFAULT_GROUP_TOL) -> SpectralDecomposition:
    """Eigendecompose a symmetric matrix, merging near-equal eigenvalues.

    Eigenvalues within group_tol * max(1, ||a||_2) of each other are merged
    into one distinct value (multiplicity-weighted mean).
    """
    if group_tol <= 0:
        raise SpectralError(f"group_tol must be positive, got {group_tol}")
    a = check_symmetric(a)
    vals, vecs = np.linalg.eigh(a)
    # eigh returns ascending order; we want descending.
    vals = vals[::-1]
    vecs = vecs[:, ::-1]
    scale = max(1.0, np.abs(vals).max(initial=0.0))
    groups: list[list[int]] = [[0]] if len(vals) else []
    for i in range(1, len(vals)):
        if vals[groups[-1][0]] - vals[i] <= group_tol * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    distinct = np.array([vals[g].mean() for g in groups])
    mults = np.array([len(g) for g in groups], dtype=int)
    projectors = []
    for g in groups:
        v = vecs[:, g]
        projectors.append(v @ v.T)
    return SpectralDecomposition(distinct, mults, projectors, vecs)


def eigengap(dec: SpectralDecomposition, e_index: int) -> float:
    """Minimum distance from distinct value e_index to the other values."""
    if not 0 <= e_index < dec.t:
        raise SpectralError(f"eigenspace index {e_index} out of range")
    if dec.t == 1:
        return float("inf")
    lam = dec.distinct_values[e_index]
    others = np.delete(dec.distinct_values, e_index)
    return float(np.abs(others - lam).min())


def restrict(a: np.ndarray, projector: np.ndarray,
             tol: float = DEFAULT_COMMUTE_TOL) -> tuple[float, float]:
    """Extreme eigenvalues of a restricted to the range of a projector.

    The projector must be (numerically) orthogonal and commute with a;
    otherwise the restriction is not well defined and we raise.
    """
    a = check_symmetric(a)
    p = check_symmetric(projector, "projector")
    scale = max(1.0, np.linalg.norm(a, 2), 1.0)
    if np.linalg.norm(p @ p - p, "fro") > 1e-8 * p.shape[0]:
        raise SpectralError("matrix is not an orthogonal projector")
    if np.linalg.norm(a @ p - p @ a, "fro") > tol * scale * p.shape[0]:
        raise SpectralError("projector range is not an invariant subspace")
    dim = int(round(np.trace(p)))
    if dim == 0:
        raise SpectralError("projector has rank zero")
    # Orthonormal basis of range(p): eigenvectors with eigenvalue ~ 1.
    vals, vecs = np.linalg.eigh(p)
    basis = vecs[:, vals > 0.5]
    restricted = basis.T @ a @ basis
    rvals = np.linalg.eigvalsh(restricted)
    return float(rvals[0]), float(rvals[-1])


def _restricted_extremes(a: np.ndarray, dec_b: SpectralDecomposition) -> list[tuple[float, float]]:
    """(min, max) of a on each eigenspace of b, in descending-eigenvalue order."""
    out = []
    col = 0
    for m in dec_b.multiplicities:
        basis = dec_b.basis[:, col:col + m]
        col += m
        rvals = np.linalg.eigvalsh(basis.T @ a @ basis)
        out.append((float(rvals[0]), float(rvals[-1])))
    return out


def is_spectrally_comonotone(a: np.ndarray, b: np.ndarray,
                             tol: float = DEFAULT_COMMUTE_TOL) -> bool:
    """True iff a and b commute and the eigenvalues of a are nonincreasing
    across the decreasing eigenspaces of b."""
    a = check_symmetric(a, "a")
    b = check_symmetric(b, "b")
    if a.shape != b.shape:
        raise SpectralError(f"dimension mismatch: {a.shape} vs {b.shape}")
    scale = max(1.0, np.linalg.norm(a, 2), np.linalg.norm(b, 2))
    if np.linalg.norm(a @ b - b @ a, "fro") > tol * scale:
        return False
    ext = _restricted_extremes(a, eig_sym(b))
    for (lo_i, _), (_, hi_next) in zip(ext, ext[1:]):
        if lo_i < hi_next - tol * scale:
            return False
    return True


def is_strictly_spectrally_comonotone(a: np.ndarray, b: np.ndarray,
                                      margin: float = 0.0,
                                      tol: float = DEFAULT_COMMUTE_TOL) -> bool:
    """As is_spectrally_comonotone, but consecutive blocks must be separated
    by strictly more than `margin`."""
    if margin < 0:
        raise SpectralError(f"margin must be nonnegative, got {margin}")
    a = check_symmetric(a, "a")
    b = check_symmetric(b, "b")
    if a.shape != b.shape:
        raise SpectralError(f"dimension mismatch: {a.shape} vs {b.shape}")
    scale = max(1.0, np.linalg.norm(a, 2), np.linalg.norm(b, 2))
    if np.linalg.norm(a @ b - b @ a, "fro") > tol * scale:
        return False
    ext = _restricted_extremes(a, eig_sym(b))
    for (lo_i, _), (_, hi_next) in zip(ext, ext[1:]):
        if not lo_i > hi_next + margin:
            return False
    return True
