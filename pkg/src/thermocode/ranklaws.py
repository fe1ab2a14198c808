"""Rank bookkeeping: what unitary encodings can and cannot do to spectra.

Unitary conjugation preserves rank and spectrum, and dephasing the register
never lowers the rank of the joint state.  Chained together this gives a hard
inequality for any letter ensemble produced from a product input:

    rank(rho_S) * rank(rho_R) <= n * max_x rank(rho_x),

so a full-rank thermal input can never be squeezed into low-rank (let alone
pure) letter states.  The probes here check the inequality on concrete
ensembles, hunt for purity violations over random protocols, and test the
linear (in)dependence of the letter states as flattened vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .protocol import Ensemble, encode, prepare_register
from .qmatrix import (check_density_matrix, check_probability_vector,
                      haar_unitary, numerical_rank, purity,
                      von_neumann_entropy)
from .thermal import Hamiltonian, gibbs_state


@dataclass(frozen=True)
class RankLawReport:
    """Outcome of the product-rank inequality on one ensemble.

    ``lhs`` is rank(rho_S) * rank(rho_R); ``rhs`` is n * max per-state rank.
    ``linear_dependence`` flags letter states that are linearly dependent as
    flattened vectors, with ``min_singular_value`` the smallest singular value
    of the stacked-state matrix backing that call.
    """

    lhs: int
    rhs: int
    holds: bool
    per_state_ranks: tuple[int, ...]
    linear_dependence: bool
    min_singular_value: float


def _stacked_singular_values(ensemble: Ensemble) -> np.ndarray:
    rows = np.stack([rho.ravel() for rho in ensemble.states])
    return np.linalg.svd(rows, compute_uv=False)


def linear_dependence(ensemble: Ensemble, tol: float = 1e-10) -> bool:
    """True when the letter states are linearly dependent as d^2 vectors."""
    sv = _stacked_singular_values(ensemble)
    cutoff = tol * float(sv[0]) if sv.size else 0.0
    return int(np.sum(sv > cutoff)) < ensemble.n


def lemma1_check(register_state: np.ndarray, system_state: np.ndarray,
                 ensemble: Ensemble) -> RankLawReport:
    """Evaluate rank(rho_S) * rank(rho_R) <= n * max_x rank(rho_x)."""
    register_state = check_density_matrix(register_state, name="register")
    system_state = check_density_matrix(system_state, name="system")
    r_reg = numerical_rank(register_state).value
    r_sys = numerical_rank(system_state).value
    ranks = tuple(numerical_rank(rho).value for rho in ensemble.states)
    lhs = r_sys * r_reg
    rhs = ensemble.n * max(ranks)
    sv = _stacked_singular_values(ensemble)
    cutoff = 1e-10 * float(sv[0]) if sv.size else 0.0
    dependent = int(np.sum(sv > cutoff)) < ensemble.n
    return RankLawReport(lhs=lhs, rhs=rhs, holds=(lhs <= rhs),
                         per_state_ranks=ranks, linear_dependence=dependent,
                         min_singular_value=float(sv[-1]) if sv.size else 0.0)


@dataclass(frozen=True)
class NogoProbeReport:
    """Random search for forbidden pure letter states at finite beta.

    Over ``trials`` random protocols (Haar register rotation, Haar letter
    unitaries) on a thermal input, records the worst cases found.  A sound
    implementation never sets ``any_pure`` at finite beta.
    """

    trials: int
    dim: int
    min_rank: int
    max_purity: float
    min_entropy_bits: float
    any_pure: bool


def theorem1_nogo_probe(n: int, d_s: int, beta: float, trials: int,
                        seed: int) -> NogoProbeReport:
    """Try to produce a pure letter state from thermal inputs; report the best.

    Every trial draws a fresh register rotation and fresh letter unitaries,
    encodes, and inspects each conditional state's rank, purity, and entropy.
    Purity above 1 - 1e-9 counts as pure.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    h_sys = Hamiltonian.ladder(d_s)
    h_reg = Hamiltonian.ladder(n)
    gamma_s = gibbs_state(h_sys, beta)
    gamma_r = gibbs_state(h_reg, beta)
    seeds = np.random.SeedSequence(seed).spawn(trials)
    min_rank = d_s
    max_purity = 0.0
    min_entropy = np.inf
    for trial_seed in seeds:
        rng = np.random.default_rng(trial_seed)
        register = prepare_register(gamma_r, haar_unitary(n, rng))
        letters = [haar_unitary(d_s, rng) for _ in range(n)]
        _, ensemble = encode(register, gamma_s, letters)
        for rho in ensemble.states:
            min_rank = min(min_rank, numerical_rank(rho).value)
            max_purity = max(max_purity, purity(rho))
            min_entropy = min(min_entropy, von_neumann_entropy(rho))
    return NogoProbeReport(trials=trials, dim=d_s, min_rank=min_rank,
                           max_purity=float(max_purity),
                           min_entropy_bits=float(min_entropy),
                           any_pure=bool(max_purity >= 1.0 - 1e-9))


@dataclass(frozen=True)
class OrthogonalEnsembleReport:
    """Pure-state ensemble accounting: rank versus support versus entropies.

    For pairwise-orthogonal pure states the mixture rank equals the number of
    carried letters and the Holevo information saturates the Shannon entropy
    of the letters; ``holds`` records both."""

    rank: int
    support_size: int
    holevo_bits: float
    shannon_bits: float
    holds: bool


def remark1_check(p, states: list[np.ndarray],
                  tol: float = 1e-9) -> OrthogonalEnsembleReport:
    """Check the orthogonal pure-state case chi = H(p) on explicit vectors.

    ``states`` are unit vectors, pairwise orthogonal within 1e-10 (anything
    less orthogonal is rejected, since the accounting below is only claimed
    for orthogonal ensembles).  Letters with probability below 1e-12 do not
    count toward the support.
    """
    p = check_probability_vector(np.asarray(p, dtype=float))
    vecs = [np.asarray(v, dtype=complex).ravel() for v in states]
    if len(vecs) != p.size:
        raise ValueError(f"{p.size} probabilities for {len(vecs)} states")
    d = vecs[0].size
    if any(v.size != d for v in vecs):
        raise ValueError("state vectors must share one dimension")
    for i, v in enumerate(vecs):
        if abs(np.linalg.norm(v) - 1.0) > 1e-10:
            raise ValueError(f"state {i} is not normalized")
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            olap = abs(np.vdot(vecs[i], vecs[j]))
            if olap > 1e-10:
                raise ValueError(f"states {i} and {j} overlap by {olap:.3e}, "
                                 "need pairwise orthogonal vectors")
    avg = np.zeros((d, d), dtype=complex)
    for w, v in zip(p, vecs):
        avg += w * np.outer(v, v.conj())
    rank = numerical_rank(avg).value
    support = int(np.sum(p > 1e-12))
    chi = von_neumann_entropy(avg)  # pure states carry no conditional entropy
    hp = float(-np.sum(p[p > 0.0] * np.log2(p[p > 0.0])))
    holds = (abs(chi - hp) <= tol) and (rank == support)
    return OrthogonalEnsembleReport(rank=rank, support_size=support,
                                    holevo_bits=float(chi), shannon_bits=hp,
                                    holds=holds)
