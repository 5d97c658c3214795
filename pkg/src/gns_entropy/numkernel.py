"""
Dense complex linear algebra kernel
Eigensystems, null spaces, orthonormalization and spectral calculus with an explicit tolerance policy
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .exceptions import DimensionMismatch, NonHermitian, NotUnitary

ComplexMatrix = np.ndarray
InnerProduct = Callable[[np.ndarray, np.ndarray], complex]

# Below this no relative threshold is meaningful in double precision
_FLOOR = 1e-14


@dataclass(frozen=True)
class Tolerance:
    """Relative threshold for rank and zero decisions"""
    epsilon: float = 1e-10

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("Tolerance epsilon must be non-negative")

    @property
    def effective(self) -> float:
        return max(self.epsilon, _FLOOR)

    def is_zero(self, value: float, scale: float = 1.0) -> bool:
        return abs(value) <= self.effective * max(scale, 1.0)


DEFAULT_TOL = Tolerance()


def as_matrix(m, name: str = "matrix") -> ComplexMatrix:
    """Coerce to a 2-D complex128 array"""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    return arr


def as_square(m, name: str = "matrix") -> ComplexMatrix:
    arr = as_matrix(m, name)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {arr.shape}")
    return arr


def adjoint(m: ComplexMatrix) -> ComplexMatrix:
    return np.conj(np.swapaxes(m, -1, -2))


def max_abs(m) -> float:
    arr = np.asarray(m)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product Tr(a^dagger b); plain <a|b> for vectors"""
    return complex(np.vdot(a, b))


def hermiticity_defect(m: ComplexMatrix) -> float:
    return max_abs(m - adjoint(m))


def is_hermitian(m: ComplexMatrix, tol: Tolerance = DEFAULT_TOL) -> bool:
    return hermiticity_defect(m) <= tol.effective * max(max_abs(m), 1.0)


def check_unitary(u: ComplexMatrix, tol: Tolerance = DEFAULT_TOL) -> ComplexMatrix:
    u = as_square(u, "unitary")
    defect = max_abs(adjoint(u) @ u - np.eye(u.shape[0]))
    if defect > max(tol.effective, 1e-9):
        raise NotUnitary(f"Matrix is not unitary (defect {defect:.3e})")
    return u


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its first significant component is positive real"""
    out = vectors.copy()
    for col in range(out.shape[1]):
        v = out[:, col]
        scale = np.max(np.abs(v)) if v.size else 0.0
        if scale == 0.0:
            continue
        idx = int(np.argmax(np.abs(v) > 1e-8 * scale))
        phase = v[idx] / abs(v[idx])
        out[:, col] = v / phase
    return out


def hermitian_eigensystem(m, tol: Tolerance = DEFAULT_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition of a hermitian matrix

    Args:
        m: square hermitian matrix
        tol: hermiticity is checked relative to the largest entry

    Returns:
        (eigenvalues ascending, eigenvectors as orthonormal columns with fixed phases)
    """
    m = as_square(m)
    if not is_hermitian(m, tol):
        raise NonHermitian(f"Matrix is not hermitian (defect {hermiticity_defect(m):.3e})")
    if m.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=np.complex128)
    values, vectors = scipy.linalg.eigh(0.5 * (m + adjoint(m)))
    return values, _fix_phases(vectors)


def _singular_split(m: ComplexMatrix, tol: Tolerance):
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return 0, np.zeros(0), np.eye(cols, dtype=np.complex128)
    _, s, vh = scipy.linalg.svd(m, full_matrices=True)
    cutoff = tol.effective * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff)) if s.size and s[0] > 0 else 0
    return rank, s, vh


def numerical_rank(m, tol: Tolerance = DEFAULT_TOL) -> int:
    rank, _, _ = _singular_split(as_matrix(m), tol)
    return rank


def kernel_basis(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the null space, as columns"""
    m = as_matrix(m)
    rank, _, vh = _singular_split(m, tol)
    return np.conj(vh[rank:]).T


def row_space_basis(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the null space, as columns"""
    m = as_matrix(m)
    rank, _, vh = _singular_split(m, tol)
    return np.conj(vh[:rank]).T


def range_projector(m, tol: Tolerance = DEFAULT_TOL) -> ComplexMatrix:
    """Orthogonal projector onto the range of a hermitian positive matrix"""
    values, vectors = hermitian_eigensystem(m, tol)
    if values.size == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    keep = values > tol.effective * max(values[-1], 0.0)
    if values[-1] <= 0:
        keep[:] = False
    v = vectors[:, keep]
    return v @ adjoint(v)


def orthonormalize(vectors: Sequence[np.ndarray], inner: Optional[InnerProduct] = None,
                   tol: Tolerance = DEFAULT_TOL,
                   basis: Optional[Sequence[np.ndarray]] = None) -> List[np.ndarray]:
    """
    Gram-Schmidt with re-orthogonalization under an arbitrary inner product

    Args:
        vectors: arrays of equal shape (vectors or matrices)
        inner: positive semidefinite sesquilinear form, Hilbert-Schmidt by default
        tol: vectors whose residual norm is below tol times their own norm are dropped
        basis: an already orthonormal family to extend; it is returned first

    Returns:
        list of orthonormal arrays spanning basis + vectors
    """
    inner = inner or hs_inner
    out = [np.asarray(b, dtype=np.complex128) for b in (basis or [])]
    for vec in vectors:
        w = np.array(vec, dtype=np.complex128)
        ref = np.sqrt(max(inner(w, w).real, 0.0))
        if ref == 0.0:
            continue
        for _ in range(2):
            for q in out:
                w = w - inner(q, w) * q
        norm = np.sqrt(max(inner(w, w).real, 0.0))
        if norm <= tol.effective * ref:
            continue
        out.append(w / norm)
    return out


def spectral_function(m, fn: Callable[[np.ndarray], np.ndarray],
                      tol: Tolerance = DEFAULT_TOL) -> ComplexMatrix:
    """f(M) for hermitian M via its eigen-decomposition"""
    values, vectors = hermitian_eigensystem(m, tol)
    return (vectors * fn(values)) @ adjoint(vectors)


def unitary_from_hamiltonian(h, t: float, tol: Tolerance = DEFAULT_TOL) -> ComplexMatrix:
    """exp(i t H) for hermitian H"""
    return spectral_function(h, lambda lam: np.exp(1j * t * lam), tol)


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic PCG64 generator for a given seed"""
    return np.random.default_rng(np.random.PCG64(seed))


def random_hermitian(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (g + adjoint(g))


def random_unitary(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix"""
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = scipy.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def cluster_eigenvalues(values: np.ndarray, gap: float) -> List[np.ndarray]:
    """Group sorted eigenvalues whose neighbours differ by less than gap (relative to spread)"""
    if values.size == 0:
        return []
    scale = max(float(np.max(np.abs(values))), 1.0)
    groups = [[0]]
    for i in range(1, values.size):
        if values[i] - values[i - 1] > gap * scale:
            groups.append([i])
        else:
            groups[-1].append(i)
    return [np.asarray(g) for g in groups]
