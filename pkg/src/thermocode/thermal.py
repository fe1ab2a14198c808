"""Gibbs states of diagonal Hamiltonians and their coarse-grained block form.

A system with energies E_0 <= ... <= E_{d-1} at inverse temperature beta has
the diagonal thermal state gamma_beta with populations exp(-beta E_i) / Z.
Splitting the d levels into n uniform blocks of d_x = d / n consecutive levels
produces a blocked view: population r_x^(l) of level l inside block x, with
global index i = x * d_x + l.  Blocks inherit the energy ordering, so block 0
always carries the largest total weight.

Multiple copies: N independent copies of the same system are flattened to a
single register of dimension d^N through the little-endian digit map
f = sum_mu k_mu d^(mu-1), and the same uniform blocking is applied to f.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .qmatrix import check_probability_vector


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not math.isfinite(beta):
        # beta = inf would make the state singular; keep every state full rank
        raise ValueError(f"beta must be finite, got {beta!r}")
    if beta < 0.0:
        raise ValueError(f"beta must be >= 0, got {beta!r}")
    return beta


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Diagonal Hamiltonian, energies sorted ascending and finite."""

    energies: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        if e.ndim != 1 or e.size < 1:
            raise ValueError(f"energies must be a non-empty vector, got shape {e.shape}")
        if not np.all(np.isfinite(e)):
            raise ValueError("energies must be finite")
        if np.any(np.diff(e) < 0):
            raise ValueError("energies must be sorted ascending")
        e.flags.writeable = False
        object.__setattr__(self, "energies", e)

    @property
    def dim(self) -> int:
        return int(self.energies.size)

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.energies).astype(complex)

    @classmethod
    def ladder(cls, dim: int, span: float = 1.0) -> "Hamiltonian":
        """Evenly spaced energies from 0 to span; dim=2 gives diag(0, span)."""
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        if dim == 1:
            return cls(np.zeros(1))
        return cls(np.linspace(0.0, float(span), dim))

    @classmethod
    def from_json(cls, doc: str | dict) -> "Hamiltonian":
        """Parse {"energies": [...]} from a JSON string or an already-parsed dict."""
        data = json.loads(doc) if isinstance(doc, str) else doc
        if not isinstance(data, dict) or "energies" not in data:
            raise ValueError("expected a JSON object with an 'energies' key")
        return cls(np.asarray(data["energies"], dtype=float))

    def to_json(self) -> str:
        return json.dumps({"energies": list(self.energies)})


def partition_function(h: Hamiltonian, beta: float) -> float:
    """Z = sum_i exp(-beta E_i).  Computed with the ground energy factored out."""
    beta = _check_beta(beta)
    e = h.energies
    shifted = np.exp(-beta * (e - e[0]))
    return float(math.exp(-beta * e[0]) * shifted.sum())


def gibbs_populations(h: Hamiltonian, beta: float) -> np.ndarray:
    """Diagonal of the thermal state: exp(-beta E_i) / Z, ordered like energies."""
    beta = _check_beta(beta)
    w = np.exp(-beta * (h.energies - h.energies[0]))
    return w / w.sum()


def gibbs_state(h: Hamiltonian, beta: float) -> np.ndarray:
    """Thermal density matrix diag(exp(-beta E_i)) / Z.

    Full rank for every finite beta >= 0; beta=0 gives the maximally mixed
    state.  Non-finite and negative beta are rejected.
    """
    return np.diag(gibbs_populations(h, beta)).astype(complex)


@dataclass(frozen=True)
class SubspacePartition:
    """Split of d = n * block_dim levels into n consecutive uniform blocks.

    Level i belongs to block x = i // block_dim at intra-block position
    l = i % block_dim.  Only uniform blocks are supported; unequal block sizes
    are rejected at construction.
    """

    n: int
    block_dim: int

    def __post_init__(self):
        if self.n < 1 or self.block_dim < 1:
            raise ValueError(f"need n >= 1 and block_dim >= 1, got {self.n}, {self.block_dim}")

    @classmethod
    def uniform(cls, dim: int, n: int) -> "SubspacePartition":
        if n < 1 or dim < 1 or dim % n != 0:
            raise ValueError(f"cannot split dimension {dim} into {n} uniform blocks")
        return cls(n=n, block_dim=dim // n)

    @property
    def dim(self) -> int:
        return self.n * self.block_dim

    @property
    def block_dims(self) -> tuple[int, ...]:
        return (self.block_dim,) * self.n

    def index_of(self, x: int, l: int) -> int:
        if not (0 <= x < self.n and 0 <= l < self.block_dim):
            raise ValueError(f"label ({x}, {l}) outside partition {self.n} x {self.block_dim}")
        return x * self.block_dim + l

    def label_of(self, i: int) -> tuple[int, int]:
        if not (0 <= i < self.dim):
            raise ValueError(f"index {i} outside dimension {self.dim}")
        return i // self.block_dim, i % self.block_dim

    def projector(self, x: int) -> np.ndarray:
        """Projector onto block x in the energy eigenbasis."""
        p = np.zeros((self.dim, self.dim), dtype=complex)
        lo = self.index_of(x, 0)
        for i in range(lo, lo + self.block_dim):
            p[i, i] = 1.0
        return p


@dataclass(frozen=True, eq=False)
class BlockedThermalState:
    """Thermal populations arranged as an (n, block_dim) table.

    ``populations[x, l]`` is the weight of level l inside block x;
    ``energies`` carries the matching energy for every flattened index, in the
    same blocked order (for several copies this order is the little-endian
    digit order, which is not ascending).  Populations always satisfy
    r = exp(-beta * energies) / Z against that array.
    """

    partition: SubspacePartition
    populations: np.ndarray
    beta: float
    energies: np.ndarray

    def __post_init__(self):
        pops = np.asarray(self.populations, dtype=float)
        if pops.shape != (self.partition.n, self.partition.block_dim):
            raise ValueError(f"populations shape {pops.shape} does not match partition "
                             f"{self.partition.n} x {self.partition.block_dim}")
        check_probability_vector(pops.ravel(), name="populations")
        e = np.asarray(self.energies, dtype=float)
        if e.shape != (self.partition.dim,):
            raise ValueError(f"energies shape {e.shape}, expected ({self.partition.dim},)")
        pops.flags.writeable = False
        e.flags.writeable = False
        object.__setattr__(self, "populations", pops)
        object.__setattr__(self, "energies", e)

    @property
    def block_weights(self) -> np.ndarray:
        """Total weight per block, q_x = sum_l r_x^(l)."""
        return self.populations.sum(axis=1)

    @property
    def flat(self) -> np.ndarray:
        """Populations flattened back to the global index order."""
        return self.populations.ravel()


def coarse_grain(h: Hamiltonian, beta: float, n: int) -> BlockedThermalState:
    """Block the thermal populations of (h, beta) into n uniform blocks."""
    part = SubspacePartition.uniform(h.dim, n)
    pops = gibbs_populations(h, beta).reshape(part.n, part.block_dim)
    return BlockedThermalState(partition=part, populations=pops,
                               beta=float(beta), energies=h.energies.copy())


def multicopy_index(k: tuple[int, ...], d_s: int, d_x: int) -> tuple[int, int, int]:
    """Map per-copy levels k = (k_1, ..., k_N) to (f, x, l).

    f = sum_mu k_mu * d_s^(mu-1) is the little-endian flattening (first copy is
    the least significant digit), x = f // d_x the block, l = f % d_x the level
    inside the block.
    """
    if d_s < 1 or d_x < 1:
        raise ValueError(f"need d_s >= 1 and d_x >= 1, got {d_s}, {d_x}")
    if len(k) == 0:
        raise ValueError("need at least one copy")
    f = 0
    for mu, digit in enumerate(k):
        if not (0 <= digit < d_s):
            raise ValueError(f"digit k_{mu + 1} = {digit} outside [0, {d_s})")
        f += digit * d_s ** mu
    return f, f // d_x, f % d_x


def multicopy_energies(h: Hamiltonian, copies: int) -> np.ndarray:
    """Total energies of N copies in little-endian flattened order."""
    if copies < 1:
        raise ValueError(f"copies must be >= 1, got {copies}")
    e = h.energies
    total = e.copy()
    for _ in range(copies - 1):
        # index i * d + j carries the lower digit j: E_total = E_high + E_j
        total = np.add.outer(total, e).ravel()
    return total


def multicopy_coarse_grain(h: Hamiltonian, beta: float, copies: int,
                           n: int) -> BlockedThermalState:
    """Block N thermal copies of (h, beta) into n uniform blocks of d^N / n.

    The populations are the N-fold Kronecker power of the single-copy
    populations, in the same little-endian order as multicopy_index; for
    copies=1 this reduces exactly to coarse_grain.
    """
    beta = _check_beta(beta)
    if copies < 1:
        raise ValueError(f"copies must be >= 1, got {copies}")
    part = SubspacePartition.uniform(h.dim ** copies, n)
    w = gibbs_populations(h, beta)
    flat = w.copy()
    for _ in range(copies - 1):
        flat = np.kron(flat, w)
    return BlockedThermalState(partition=part,
                               populations=flat.reshape(part.n, part.block_dim),
                               beta=beta, energies=multicopy_energies(h, copies))
