"""Information measures and the heat ledger of the encoding step.

All quantities are in bits.  For an encoding that leaves the register diagonal
untouched and merely rotates the system conditioned on the letter, the Holevo
information of the letter ensemble, the entropy gained by the system marginal,
and the heat drawn from the bath tie together exactly:

    chi = S(rho_tilde_S) - sum_x p_x S(rho_x) = Delta S_S = beta Q - D,

where Q = Tr[H (rho_tilde_S - gamma_beta)] is the average energy change of the
system, beta Q is converted to bits by 1/ln 2, and
D = D(rho_tilde_S || gamma_beta) is the relative entropy to the thermal state
(equal to beta times the free-energy gain).  Readout quality is bracketed
between the Holevo ceiling and a Fano-type floor computed from the peak
success probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .protocol import Ensemble
from .qmatrix import (LN2, check_density_matrix, check_probability_vector,
                      relative_entropy, von_neumann_entropy)
from .thermal import Hamiltonian, gibbs_populations

LEDGER_TOL = 1e-9


def shannon_entropy(p: np.ndarray) -> float:
    """H(p) = -sum p log2 p in bits; zero entries contribute nothing."""
    p = check_probability_vector(np.asarray(p, dtype=float))
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def binary_entropy(p: float) -> float:
    """H2(p) for a single probability p in [0, 1]."""
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return float(-p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p))


def holevo(ensemble: Ensemble) -> float:
    """chi = S(sum_x p_x rho_x) - sum_x p_x S(rho_x), the readout ceiling."""
    avg = von_neumann_entropy(ensemble.average)
    cond = sum(p * von_neumann_entropy(rho)
               for p, rho in zip(ensemble.probabilities, ensemble.states))
    return max(float(avg - cond), 0.0)


def mutual_information(px: np.ndarray, cond) -> float:
    """I(X:Y) = H(Y) - H(Y|X) for inputs px and channel columns p(y|x)."""
    px = check_probability_vector(np.asarray(px, dtype=float))
    matrix = cond.matrix if hasattr(cond, "matrix") else np.asarray(cond, dtype=float)
    if matrix.shape[1] != px.size:
        raise ValueError(f"channel has {matrix.shape[1]} inputs for {px.size} priors")
    py = matrix @ px
    h_y = shannon_entropy(py)
    h_y_given_x = 0.0
    for x in range(px.size):
        col = matrix[:, x]
        nz = col[col > 0.0]
        h_y_given_x += px[x] * float(-np.sum(nz * np.log2(nz)))
    return max(float(h_y - h_y_given_x), 0.0)


def fano_floor(hx: float, peak: float, n: int, clamp: bool = True) -> float:
    """Converse floor H(X) - H2(peak) - (1 - peak) log2(n - 1) on I(X:Y).

    ``peak`` is the success probability actually achieved; any channel reaching
    it must carry at least this much mutual information.  The raw value can be
    negative for small alphabets, in which case the floor is vacuous; by
    default it is clamped at 0 (pass clamp=False for the raw value).
    """
    if n < 2:
        raise ValueError(f"need an alphabet of at least 2 letters, got {n}")
    if not (0.0 < peak <= 1.0 + 1e-12):
        raise ValueError(f"peak success probability {peak!r} outside (0, 1]")
    peak = min(float(peak), 1.0)
    spread = (1.0 - peak) * math.log2(n - 1) if n > 2 else 0.0
    raw = float(hx) - binary_entropy(peak) - spread
    return max(raw, 0.0) if clamp else raw


def l1_distance(q: np.ndarray, p: np.ndarray) -> float:
    """Total variation distance (1/2) sum |q_i - p_i| between distributions."""
    q = check_probability_vector(np.asarray(q, dtype=float), name="q")
    p = check_probability_vector(np.asarray(p, dtype=float), name="p")
    if q.shape != p.shape:
        raise ValueError(f"shape mismatch {q.shape} vs {p.shape}")
    return float(0.5 * np.sum(np.abs(q - p)))


@dataclass(frozen=True)
class ThermoLedger:
    """Bookkeeping of one encoding step, everything in bits.

    ``beta_q`` is beta * Tr[H (after - before)] / ln 2; ``beta_delta_f`` is the
    free-energy gain of the system in bits, which equals ``rel_entropy``, the
    relative entropy distance from the output marginal back to the thermal
    state.  The identities chi = delta_s_system = beta_q - rel_entropy hold for
    every valid encoding and are enforced at construction time by
    thermo_ledger.
    """

    delta_s_system: float
    delta_s_register: float
    beta_q: float
    rel_entropy: float
    holevo_chi: float
    beta_delta_f: float


def thermo_ledger(system_before: np.ndarray, system_after: np.ndarray,
                  register_before: np.ndarray, register_after: np.ndarray,
                  h, beta: float, ensemble: Ensemble) -> ThermoLedger:
    """Assemble the ledger and enforce its identities.

    ``system_before`` must be the thermal state of (h, beta) within 1e-10;
    ``h`` may be a Hamiltonian or a bare energy vector matching the order of
    the state's diagonal (needed for flattened copies, whose blocked energy
    order is not ascending).  Raises when chi = Delta S_S = beta Q - D fails
    beyond 1e-9, which signals inputs that are not one encoding's before/after
    pair.
    """
    energies = np.asarray(h.energies if isinstance(h, Hamiltonian) else h, dtype=float)
    system_before = check_density_matrix(system_before, name="system_before")
    system_after = check_density_matrix(system_after, name="system_after")
    d = system_before.shape[0]
    if energies.shape != (d,):
        raise ValueError(f"energies shape {energies.shape}, expected ({d},)")
    if beta < 0 or not math.isfinite(beta):
        raise ValueError(f"beta must be finite and >= 0, got {beta!r}")
    w = np.exp(-beta * (energies - energies.min()))
    w /= w.sum()
    if np.max(np.abs(np.diag(system_before).real - w)) > 1e-10 or \
            np.max(np.abs(system_before - np.diag(np.diag(system_before)))) > 1e-10:
        raise ValueError("system_before is not the thermal state of (h, beta)")

    delta_s_system = von_neumann_entropy(system_after) - von_neumann_entropy(system_before)
    delta_s_register = von_neumann_entropy(register_after) - von_neumann_entropy(register_before)
    heat = float(np.trace(np.diag(energies) @ (system_after - system_before)).real)
    beta_q = beta * heat / LN2
    rel = relative_entropy(system_after, system_before)
    chi = holevo(ensemble)

    if abs(chi - delta_s_system) > LEDGER_TOL:
        raise ValueError(f"chi = {chi!r} but Delta S_S = {delta_s_system!r}; "
                         "inputs are not one encoding's before/after pair")
    if abs(chi - (beta_q - rel)) > LEDGER_TOL:
        raise ValueError(f"chi = {chi!r} but beta Q - D = {beta_q - rel!r}; "
                         "inputs are not one encoding's before/after pair")
    if chi > beta_q + LEDGER_TOL:
        raise ValueError(f"chi = {chi!r} exceeds beta Q = {beta_q!r}")
    return ThermoLedger(delta_s_system=float(delta_s_system),
                        delta_s_register=float(delta_s_register),
                        beta_q=float(beta_q), rel_entropy=float(rel),
                        holevo_chi=float(chi), beta_delta_f=float(rel))


@dataclass(frozen=True)
class ChainCheck:
    """Slack of each link in H(X) >= chi >= I(X:Y) >= fano floor."""

    holds: bool
    slack_hx_chi: float
    slack_chi_ixy: float
    slack_ixy_floor: float


def chain_inequality(hx: float, chi: float, ixy: float, floor: float,
                     tol: float = 1e-9) -> ChainCheck:
    """Verify the readout chain and report how much room each link has."""
    s1 = float(hx - chi)
    s2 = float(chi - ixy)
    s3 = float(ixy - floor)
    return ChainCheck(holds=(s1 >= -tol and s2 >= -tol and s3 >= -tol),
                      slack_hx_chi=s1, slack_chi_ixy=s2, slack_ixy_floor=s3)
