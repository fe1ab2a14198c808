"""Finite-dimensional matrix primitives for thermal encoding experiments.

Everything downstream works with explicit dense matrices: density matrices
(Hermitian, unit trace, positive semidefinite), unitaries, tensor products,
partial traces, and the entropic functionals built from eigenvalues.  All
entropies are in bits (log base 2).

Validation thresholds are deliberately asymmetric: Hermiticity is cheap to
maintain exactly, so its tolerance (1e-12) is tighter than the trace and
positivity tolerances (1e-10) which accumulate error through products of
rotations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LN2 = np.log(2.0)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
UNITARY_TOL = 1e-10
RANK_RTOL = 1e-10
# support thresholds for relative entropy: sigma eigenvalue below SIGMA_SUPPORT_TOL
# counts as "outside the support" once rho puts more than RHO_WEIGHT_TOL on it
SIGMA_SUPPORT_TOL = 1e-12
RHO_WEIGHT_TOL = 1e-10


def check_density_matrix(rho: np.ndarray, *, name: str = "state") -> np.ndarray:
    """Validate a density matrix and return it as a complex array.

    Raises ValueError if ``rho`` is not square, not Hermitian within 1e-12,
    has trace off from 1 by more than 1e-10, or has an eigenvalue below -1e-10.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {rho.shape}")
    herm = np.max(np.abs(rho - rho.conj().T)) if rho.size else 0.0
    if herm > HERMITIAN_TOL:
        raise ValueError(f"{name} is not Hermitian: max deviation {herm:.3e}")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"{name} has trace {tr!r}, expected 1")
    evals = np.linalg.eigvalsh(rho)
    if evals[0] < -PSD_TOL:
        raise ValueError(f"{name} has negative eigenvalue {evals[0]:.3e}")
    return rho


def check_unitary(u: np.ndarray, *, name: str = "unitary") -> np.ndarray:
    """Validate that ``u`` is unitary within 1e-10 and return it as complex."""
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {u.shape}")
    dev = np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0])))
    if dev > UNITARY_TOL:
        raise ValueError(f"{name} is not unitary: max deviation {dev:.3e}")
    return u


def check_probability_vector(p: np.ndarray, *, tol: float = 1e-10,
                             name: str = "probabilities") -> np.ndarray:
    """Validate a probability vector (entries >= -tol, sum within tol of 1)."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {p.shape}")
    if p.size == 0:
        raise ValueError(f"{name} is empty")
    if np.min(p) < -tol:
        raise ValueError(f"{name} has negative entry {np.min(p):.3e}")
    s = p.sum()
    if abs(s - 1.0) > tol:
        raise ValueError(f"{name} sums to {s!r}, expected 1")
    return p


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product a (x) b, with a acting on the first factor."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(joint: np.ndarray, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Trace out one factor of a bipartite matrix on dims[0] * dims[1].

    ``keep=0`` returns the reduced matrix on the first factor, ``keep=1`` on
    the second.  The partial trace is linear and maps density matrices to
    density matrices.
    """
    da, db = dims
    joint = np.asarray(joint, dtype=complex)
    if joint.shape != (da * db, da * db):
        raise ValueError(f"joint has shape {joint.shape}, expected {(da * db, da * db)}")
    t = joint.reshape(da, db, da, db)
    if keep == 0:
        return np.einsum("ijkj->ik", t)
    if keep == 1:
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 0 or 1, got {keep!r}")


def dephase_register(joint: np.ndarray, dims: tuple[int, int],
                     basis: np.ndarray | None = None) -> np.ndarray:
    """Project a bipartite state onto block-diagonal form over the first factor.

    Zeroes every off-diagonal register block: the output is
    sum_x (|x><x| (x) 1) joint (|x><x| (x) 1).  With ``basis`` given (a unitary
    whose columns define the register basis), dephasing happens in that basis.
    Trace-preserving, positivity-preserving, idempotent.
    """
    da, db = dims
    joint = np.asarray(joint, dtype=complex)
    if joint.shape != (da * db, da * db):
        raise ValueError(f"joint has shape {joint.shape}, expected {(da * db, da * db)}")
    if basis is not None:
        b = check_unitary(basis, name="basis")
        if b.shape[0] != da:
            raise ValueError(f"basis has dimension {b.shape[0]}, register has {da}")
        rot = tensor(b, np.eye(db))
        return rot @ dephase_register(rot.conj().T @ joint @ rot, dims) @ rot.conj().T
    t = joint.reshape(da, db, da, db)
    out = np.zeros_like(t)
    for x in range(da):
        out[x, :, x, :] = t[x, :, x, :]
    return out.reshape(da * db, da * db)


def haar_unitary(dim: int, seed) -> np.ndarray:
    """Draw a Haar-distributed unitary, deterministically for a fixed seed.

    Complex Ginibre matrix followed by QR; the R diagonal is rephased to unit
    modulus so the distribution does not inherit the QR sign convention.
    ``seed`` may be an integer or a numpy Generator.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    z /= np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    q *= d / np.abs(d)  # rescale columns; |r_jj| > 0 almost surely
    return q


@dataclass(frozen=True)
class RankReport:
    """Numerical rank of a matrix together with the evidence for it.

    ``value`` counts singular values strictly above ``tolerance``, which is the
    absolute cutoff rtol * max(singular_values) actually applied.
    """

    value: int
    singular_values: tuple[float, ...]
    tolerance: float


def numerical_rank(m: np.ndarray, rtol: float = RANK_RTOL) -> RankReport:
    """Rank of ``m`` with singular values below rtol * s_max treated as zero."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"need a matrix, got shape {m.shape}")
    sv = np.linalg.svd(m, compute_uv=False)
    smax = float(sv[0]) if sv.size else 0.0
    cutoff = rtol * smax
    value = int(np.sum(sv > cutoff))
    return RankReport(value=value, singular_values=tuple(float(s) for s in sv),
                      tolerance=cutoff)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S(rho) = -Tr[rho log2 rho] in bits.

    Eigenvalues within the positivity tolerance of zero contribute nothing
    (x log x -> 0).
    """
    rho = check_density_matrix(rho)
    evals = np.linalg.eigvalsh(rho)
    evals = evals[evals > 0.0]
    return float(-np.sum(evals * np.log2(evals))) if evals.size else 0.0


def relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Quantum relative entropy D(rho || sigma) in bits.

    Returns inf when rho has weight above 1e-10 on an eigenvector of sigma
    whose eigenvalue is below 1e-12 (support condition).  Otherwise
    D = Tr[rho log2 rho] - sum_i w_i log2 s_i with w_i = <v_i|rho|v_i> the
    weight of rho on sigma's i-th eigenvector.  Never negative.
    """
    rho = check_density_matrix(rho, name="rho")
    sigma = check_density_matrix(sigma, name="sigma")
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch {rho.shape} vs {sigma.shape}")
    s, v = np.linalg.eigh(sigma)
    w = np.einsum("ij,jk,ki->i", v.conj().T, rho, v).real
    outside = (s < SIGMA_SUPPORT_TOL) & (w > RHO_WEIGHT_TOL)
    if np.any(outside):
        return float("inf")
    r = np.linalg.eigvalsh(rho)
    r = r[r > 0.0]
    tr_rho_log_rho = float(np.sum(r * np.log2(r))) if r.size else 0.0
    inside = s >= SIGMA_SUPPORT_TOL
    cross = float(np.sum(w[inside] * np.log2(s[inside])))
    return max(tr_rho_log_rho - cross, 0.0)


def purity(rho: np.ndarray) -> float:
    """Tr[rho^2]; equals 1 exactly on pure states, 1/d on the maximally mixed."""
    rho = check_density_matrix(rho)
    return float(np.trace(rho @ rho).real)
