"""State discrimination: measurements, success probabilities, optimality.

The receiver guesses the letter by measuring the system with a POVM.  For the
block-shift encoding the natural measurement is the projective POVM onto the
partition blocks; its success probability turns out to equal C_max, the sum of
the d_S / n largest eigenvalues of the system state, which upper-bounds every
measurement on ensembles of the shifted-thermal form.

Optimality is certified two independent ways: the Barnett-Croke stationarity
and positivity conditions for minimum-error discrimination, and brute-force
oracles (the closed-form two-state Helstrom value, and exhaustive label
permutation for small alphabets).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .protocol import Ensemble
from .qmatrix import check_density_matrix
from .thermal import SubspacePartition

POVM_TOL = 1e-10


@dataclass(eq=False)
class Povm:
    """Measurement with positive semidefinite elements summing to identity."""

    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.elements) == 0:
            raise ValueError("POVM needs at least one element")
        elems = []
        for i, e in enumerate(self.elements):
            e = np.asarray(e, dtype=complex)
            if e.ndim != 2 or e.shape[0] != e.shape[1]:
                raise ValueError(f"element {i} is not square: shape {e.shape}")
            if np.max(np.abs(e - e.conj().T)) > 1e-12:
                raise ValueError(f"element {i} is not Hermitian")
            if np.linalg.eigvalsh(e)[0] < -POVM_TOL:
                raise ValueError(f"element {i} has negative eigenvalue")
            elems.append(e)
        dim = elems[0].shape[0]
        if any(e.shape[0] != dim for e in elems):
            raise ValueError("POVM elements must share one dimension")
        total = sum(elems)
        if np.max(np.abs(total - np.eye(dim))) > POVM_TOL:
            raise ValueError("POVM elements do not sum to the identity")
        for e in elems:
            e.flags.writeable = False
        self.elements = tuple(elems)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return int(self.elements[0].shape[0])

    def permuted(self, perm: tuple[int, ...]) -> "Povm":
        """Same elements under relabeled outcomes; models a mislabeled decoder."""
        if sorted(perm) != list(range(self.size)):
            raise ValueError(f"{perm!r} is not a permutation of {self.size} outcomes")
        return Povm(elements=tuple(self.elements[p] for p in perm))


def projective_povm(partition: SubspacePartition) -> Povm:
    """The block measurement {Pi_x} of a uniform partition."""
    return Povm(elements=tuple(partition.projector(x) for x in range(partition.n)))


@dataclass(eq=False)
class ConditionalDistribution:
    """Column-stochastic table p(y|x): column x is the outcome distribution."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2:
            raise ValueError(f"need a matrix, got shape {m.shape}")
        if np.min(m) < -POVM_TOL or np.max(m) > 1.0 + POVM_TOL:
            raise ValueError("conditional probabilities must lie in [0, 1]")
        col = m.sum(axis=0)
        if np.max(np.abs(col - 1.0)) > POVM_TOL:
            raise ValueError(f"columns must sum to 1, worst deviation "
                             f"{np.max(np.abs(col - 1.0)):.3e}")
        m.flags.writeable = False
        self.matrix = m

    @property
    def n_out(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def n_in(self) -> int:
        return int(self.matrix.shape[1])

    def output_distribution(self, px: np.ndarray) -> np.ndarray:
        """p(y) = sum_x p(y|x) p(x)."""
        px = np.asarray(px, dtype=float)
        if px.shape != (self.n_in,):
            raise ValueError(f"px shape {px.shape}, expected ({self.n_in},)")
        return self.matrix @ px


def conditional_distribution(ensemble: Ensemble, povm: Povm) -> ConditionalDistribution:
    """Measurement statistics p(y|x) = Tr[P_y rho_x]."""
    if povm.dim != ensemble.dim:
        raise ValueError(f"POVM dimension {povm.dim} does not match "
                         f"ensemble dimension {ensemble.dim}")
    m = np.zeros((povm.size, ensemble.n))
    for x, rho in enumerate(ensemble.states):
        for y, e in enumerate(povm.elements):
            m[y, x] = np.trace(e @ rho).real
    return ConditionalDistribution(matrix=m)


def success_probability(ensemble: Ensemble, povm: Povm) -> float:
    """P_succ = sum_x p_x Tr[P_x rho_x] with outcome x read as the guess x."""
    if povm.size < ensemble.n:
        raise ValueError(f"POVM has {povm.size} outcomes for {ensemble.n} letters")
    cond = conditional_distribution(ensemble, povm)
    return float(np.sum(ensemble.probabilities * np.diag(cond.matrix[:ensemble.n, :])))


def c_max(system: np.ndarray, d_r: int) -> float:
    """Sum of the d_S / d_r largest eigenvalues of the system state.

    This is the ceiling for the success probability of the shift encoding with
    a d_r-letter register; it requires d_r to divide the system dimension.
    """
    system = check_density_matrix(system, name="system")
    d_s = system.shape[0]
    if d_r < 1 or d_s % d_r != 0:
        raise ValueError(f"register size {d_r} does not divide system dimension {d_s}")
    evals = np.sort(np.linalg.eigvalsh(system))[::-1]
    return float(evals[:d_s // d_r].sum())


@dataclass(frozen=True)
class BarnettCrokeCertificate:
    """Minimum-error optimality evidence for a measurement on an ensemble.

    ``cross_residual`` is the largest spectral norm of
    P_y (p_y rho_y - p_x rho_x) P_x over outcome pairs (zero at a stationary
    point); ``positivity_residual`` is the smallest eigenvalue over x of
    sum_y p_y rho_y P_y - p_x rho_x (non-negative iff the measurement is
    globally optimal).  ``passes`` applies the tolerance to both.
    """

    passes: bool
    cross_residual: float
    positivity_residual: float
    tolerance: float


def barnett_croke_certificate(ensemble: Ensemble, povm: Povm,
                              tol: float = 1e-9) -> BarnettCrokeCertificate:
    """Check the stationarity and positivity conditions for minimum error."""
    if povm.size != ensemble.n:
        raise ValueError(f"need one POVM outcome per letter, got {povm.size} "
                         f"for {ensemble.n}")
    weighted = [p * rho for p, rho in zip(ensemble.probabilities, ensemble.states)]
    cross = 0.0
    for x, y in itertools.permutations(range(ensemble.n), 2):
        m = povm.elements[y] @ (weighted[y] - weighted[x]) @ povm.elements[x]
        cross = max(cross, float(np.linalg.norm(m, 2)))
    gamma_op = sum(w @ e for w, e in zip(weighted, povm.elements))
    positivity = np.inf
    for w in weighted:
        diff = gamma_op - w
        diff = (diff + diff.conj().T) / 2
        positivity = min(positivity, float(np.linalg.eigvalsh(diff)[0]))
    return BarnettCrokeCertificate(passes=(cross <= tol and positivity >= -tol),
                                   cross_residual=cross,
                                   positivity_residual=float(positivity),
                                   tolerance=tol)


def helstrom_oracle(p0: float, rho0: np.ndarray, p1: float, rho1: np.ndarray) -> float:
    """Closed-form optimum for two states: (1 + || p0 rho0 - p1 rho1 ||_1) / 2."""
    if abs(p0 + p1 - 1.0) > 1e-10:
        raise ValueError(f"priors sum to {p0 + p1!r}, expected 1")
    if min(p0, p1) < 0:
        raise ValueError("priors must be non-negative")
    rho0 = check_density_matrix(rho0, name="rho0")
    rho1 = check_density_matrix(rho1, name="rho1")
    if rho0.shape != rho1.shape:
        raise ValueError(f"dimension mismatch {rho0.shape} vs {rho1.shape}")
    gap = p0 * rho0 - p1 * rho1
    trace_norm = float(np.sum(np.abs(np.linalg.eigvalsh(gap))))
    return (1.0 + trace_norm) / 2.0


def exhaustive_permutation_oracle(ensemble: Ensemble, povm: Povm) -> float:
    """Best success probability over all relabelings of the POVM outcomes.

    Brute force over n! assignments; refuses alphabets larger than 8.
    """
    n = ensemble.n
    if n > 8:
        raise ValueError(f"exhaustive search over {n}! labelings is not reasonable")
    if povm.size != n:
        raise ValueError(f"need one POVM outcome per letter, got {povm.size} for {n}")
    scores = conditional_distribution(ensemble, povm).matrix * ensemble.probabilities
    best = -np.inf
    for perm in itertools.permutations(range(n)):
        best = max(best, sum(scores[perm[x], x] for x in range(n)))
    return float(best)
