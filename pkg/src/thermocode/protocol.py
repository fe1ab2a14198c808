"""Encoding classical letters into a thermal system with a quantum register.

The sender holds a register R (dimension d_R) whose diagonal probabilities
p_x weight the letters, and a system S in the thermal state gamma_beta.  A
controlled unitary sum_x |x><x| (x) U_x applied to rho_R (x) gamma_beta
correlates the two: conditioned on register letter x the system ends up in
rho_x = U_x gamma_beta U_x^dagger.  The letter unitaries used throughout are
cyclic block shifts for a uniform partition of the energy levels: block y is
moved to block (y + x) mod n while the level inside the block is preserved.

The joint output state, its dephased classical-quantum version, and the letter
ensemble {(p_x, rho_x)} are the raw material for the discrimination and
information-theoretic analyses in the sibling modules.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .qmatrix import (check_density_matrix, check_probability_vector,
                      check_unitary, haar_unitary, tensor)
from .thermal import (BlockedThermalState, Hamiltonian, SubspacePartition,
                      coarse_grain, gibbs_state, multicopy_coarse_grain)

# mass allowed on register letters beyond the n encoded ones
TAIL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Register:
    """Register state together with its diagonal probabilities.

    The probabilities are the diagonal of ``state`` in the computational
    basis; they are stored separately because every downstream quantity only
    ever reads the diagonal, which the encoding provably leaves untouched.
    """

    state: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        state = check_density_matrix(self.state, name="register state")
        probs = check_probability_vector(self.probabilities, tol=1e-10)
        if probs.shape != (state.shape[0],):
            raise ValueError(f"probabilities shape {probs.shape} does not match "
                             f"register dimension {state.shape[0]}")
        if np.max(np.abs(probs - np.diag(state).real)) > 1e-12:
            raise ValueError("probabilities must equal the diagonal of the state")
        state.flags.writeable = False
        probs.flags.writeable = False
        object.__setattr__(self, "state", state)
        object.__setattr__(self, "probabilities", probs)

    @property
    def dim(self) -> int:
        return int(self.state.shape[0])

    @classmethod
    def from_probabilities(cls, p, dim: int | None = None) -> "Register":
        """Diagonal register diag(p), zero-padded up to ``dim`` if given."""
        p = check_probability_vector(np.asarray(p, dtype=float))
        dim = p.size if dim is None else int(dim)
        if dim < p.size:
            raise ValueError(f"dim {dim} is smaller than {p.size} probabilities")
        full = np.zeros(dim)
        full[:p.size] = p
        return cls(state=np.diag(full).astype(complex), probabilities=full)


def prepare_register(gamma: np.ndarray, u_r: np.ndarray) -> Register:
    """Rotate a thermal register: rho_R = U_R gamma U_R^dagger.

    The diagonal probabilities come out as p_x = sum_j |u_xj|^2 gamma_jj, a
    doubly stochastic mixture of the thermal populations.
    """
    gamma = check_density_matrix(gamma, name="gamma")
    u_r = check_unitary(u_r, name="u_r")
    if u_r.shape != gamma.shape:
        raise ValueError(f"dimension mismatch {u_r.shape} vs {gamma.shape}")
    state = u_r @ gamma @ u_r.conj().T
    state = (state + state.conj().T) / 2  # scrub rounding off Hermiticity
    return Register(state=state, probabilities=np.diag(state).real.copy())


def shift_unitary(x: int, partition: SubspacePartition) -> np.ndarray:
    """Permutation unitary moving block y to block (y + x) mod n, level fixed."""
    n, d_x = partition.n, partition.block_dim
    if not (0 <= x < n):
        raise ValueError(f"shift {x} outside [0, {n})")
    u = np.zeros((partition.dim, partition.dim), dtype=complex)
    for y in range(n):
        for l in range(d_x):
            u[partition.index_of((y + x) % n, l), partition.index_of(y, l)] = 1.0
    return u


def shift_unitaries(partition: SubspacePartition) -> list[np.ndarray]:
    """The full cyclic family [U_0, ..., U_{n-1}]; U_0 is the identity."""
    return [shift_unitary(x, partition) for x in range(partition.n)]


def controlled_unitary(unitaries: list[np.ndarray], d_r: int) -> np.ndarray:
    """Block-diagonal control sum_x |x><x| (x) U_x on a d_r * d_s space.

    Register letters beyond the given unitaries act as the identity, so a
    register larger than the alphabet is allowed but never required.
    """
    n = len(unitaries)
    if n == 0:
        raise ValueError("need at least one unitary")
    if d_r < n:
        raise ValueError(f"register dimension {d_r} is smaller than {n} unitaries")
    us = [check_unitary(u) for u in unitaries]
    d_s = us[0].shape[0]
    if any(u.shape[0] != d_s for u in us):
        raise ValueError("all controlled unitaries must share one dimension")
    out = np.zeros((d_r * d_s, d_r * d_s), dtype=complex)
    eye = np.eye(d_s, dtype=complex)
    for x in range(d_r):
        block = us[x] if x < n else eye
        out[x * d_s:(x + 1) * d_s, x * d_s:(x + 1) * d_s] = block
    return out


@dataclass(eq=False)
class Ensemble:
    """Letter ensemble {(p_x, rho_x)} with a common dimension."""

    probabilities: np.ndarray
    states: tuple[np.ndarray, ...]

    def __post_init__(self):
        probs = check_probability_vector(np.asarray(self.probabilities, dtype=float),
                                         tol=1e-10)
        states = tuple(check_density_matrix(s, name=f"state {i}")
                       for i, s in enumerate(self.states))
        if len(states) != probs.size:
            raise ValueError(f"{probs.size} probabilities for {len(states)} states")
        dim = states[0].shape[0]
        if any(s.shape[0] != dim for s in states):
            raise ValueError("ensemble states must share one dimension")
        probs.flags.writeable = False
        for s in states:
            s.flags.writeable = False
        self.probabilities = probs
        self.states = states

    @property
    def n(self) -> int:
        return int(self.probabilities.size)

    @property
    def dim(self) -> int:
        return int(self.states[0].shape[0])

    @property
    def average(self) -> np.ndarray:
        """The blind mixture sum_x p_x rho_x seen without the letter."""
        out = np.zeros_like(self.states[0])
        for p, s in zip(self.probabilities, self.states):
            out += p * s
        return out


def encode(register: Register, system: np.ndarray,
           unitaries: list[np.ndarray]) -> tuple[np.ndarray, Ensemble]:
    """Apply the controlled unitary to register (x) system.

    Returns the joint output state and the letter ensemble
    {(p_x, U_x system U_x^dagger)}.  The register marginal keeps its diagonal,
    the system marginal of the joint equals the ensemble average, and the
    joint spectrum is that of the input product state.

    When the register is larger than the alphabet, the stray letters must
    carry at most 1e-12 total probability.
    """
    system = check_density_matrix(system, name="system")
    n = len(unitaries)
    if register.dim < n:
        raise ValueError(f"register dimension {register.dim} < alphabet size {n}")
    tail = float(register.probabilities[n:].sum())
    if tail > TAIL_TOL:
        raise ValueError(f"register mass {tail:.3e} sits on letters beyond the alphabet")
    u = controlled_unitary(unitaries, register.dim)
    joint = u @ tensor(register.state, system) @ u.conj().T
    joint = (joint + joint.conj().T) / 2
    states = []
    for ux in unitaries:
        s = ux @ system @ ux.conj().T
        states.append((s + s.conj().T) / 2)
    return joint, Ensemble(probabilities=register.probabilities[:n].copy(),
                           states=tuple(states))


def overlap_table(ensemble: Ensemble, partition: SubspacePartition) -> np.ndarray:
    """Measured block weights: entry (z, x) = Tr[Pi_z rho_x].

    Columns are probability vectors; for shift-encoded thermal ensembles the
    table is the circulant of the blocked weights (compare
    circulant_overlap_table, which computes the same table from populations
    alone).
    """
    if ensemble.dim != partition.dim:
        raise ValueError(f"ensemble dimension {ensemble.dim} does not match "
                         f"partition dimension {partition.dim}")
    d_x = partition.block_dim
    table = np.zeros((partition.n, ensemble.n))
    for x, rho in enumerate(ensemble.states):
        diag = np.diag(rho).real
        for z in range(partition.n):
            table[z, x] = diag[z * d_x:(z + 1) * d_x].sum()
    return table


def circulant_overlap_table(blocked: BlockedThermalState) -> np.ndarray:
    """Overlap table predicted from populations: (z, x) -> q_{(z - x) mod n}."""
    q = blocked.block_weights
    n = blocked.partition.n
    table = np.zeros((n, n))
    for x in range(n):
        for z in range(n):
            table[z, x] = q[(z - x) % n]
    return table


@dataclass(eq=False)
class ProtocolInstance:
    """A full experiment description, serializable to JSON.

    ``register_mode`` is "explicit" (diagonal register with given or uniform
    probabilities) or "haar" (thermal register of dimension n rotated by a
    seeded Haar unitary).  ``copies`` > 1 encodes into N flattened thermal
    copies of the system.
    """

    hamiltonian: Hamiltonian
    beta: float
    n: int
    copies: int = 1
    register_mode: str = "explicit"
    probabilities: np.ndarray | None = None
    seed: int | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.register_mode not in ("explicit", "haar"):
            raise ValueError(f"unknown register mode {self.register_mode!r}")
        if self.copies < 1:
            raise ValueError(f"copies must be >= 1, got {self.copies}")
        if self.system_dim % self.n != 0:
            raise ValueError(f"alphabet size {self.n} does not divide "
                             f"system dimension {self.system_dim}")
        if self.register_mode == "haar" and self.seed is None:
            raise ValueError("haar register mode needs a seed")
        if self.probabilities is not None:
            p = check_probability_vector(np.asarray(self.probabilities, dtype=float))
            if p.size != self.n:
                raise ValueError(f"{p.size} probabilities for alphabet size {self.n}")
            self.probabilities = p

    @property
    def system_dim(self) -> int:
        return self.hamiltonian.dim ** self.copies

    def partition(self) -> SubspacePartition:
        return SubspacePartition.uniform(self.system_dim, self.n)

    def blocked(self) -> BlockedThermalState:
        if self.copies == 1:
            return coarse_grain(self.hamiltonian, self.beta, self.n)
        return multicopy_coarse_grain(self.hamiltonian, self.beta, self.copies, self.n)

    def system_state(self) -> np.ndarray:
        if self.copies == 1:
            return gibbs_state(self.hamiltonian, self.beta)
        # flattened copies, lowest digit = first copy, same order as blocked()
        return np.diag(self.blocked().flat).astype(complex)

    def register(self) -> Register:
        if self.register_mode == "explicit":
            p = self.probabilities
            if p is None:
                p = np.full(self.n, 1.0 / self.n)
            return Register.from_probabilities(p)
        reg_h = Hamiltonian.ladder(self.n)
        gamma = gibbs_state(reg_h, self.beta)
        return prepare_register(gamma, haar_unitary(self.n, self.seed))

    def unitaries(self) -> list[np.ndarray]:
        return shift_unitaries(self.partition())

    def encode(self) -> tuple[np.ndarray, Ensemble]:
        key = "encoded"
        if key not in self._cache:
            self._cache[key] = encode(self.register(), self.system_state(),
                                      self.unitaries())
        return self._cache[key]

    def to_json(self) -> str:
        doc: dict = {
            "hamiltonian": {"energies": list(self.hamiltonian.energies)},
            "beta": self.beta,
            "n": self.n,
            "copies": self.copies,
            "register_mode": self.register_mode,
        }
        if self.register_mode == "explicit" and self.probabilities is not None:
            doc["probabilities"] = list(self.probabilities)
        if self.register_mode == "haar":
            doc["seed"] = self.seed
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, doc: str | dict) -> "ProtocolInstance":
        data = json.loads(doc) if isinstance(doc, str) else doc
        if not isinstance(data, dict):
            raise ValueError("protocol instance must be a JSON object")
        try:
            h = Hamiltonian.from_json(data["hamiltonian"])
            beta = float(data["beta"])
            n = int(data["n"])
        except KeyError as exc:
            raise ValueError(f"protocol instance is missing key {exc}") from exc
        probs = data.get("probabilities")
        return cls(hamiltonian=h, beta=beta, n=n,
                   copies=int(data.get("copies", 1)),
                   register_mode=data.get("register_mode", "explicit"),
                   probabilities=None if probs is None else np.asarray(probs, float),
                   seed=data.get("seed"))
