"""Grid verification: every law the library claims, checked on one standard grid.

The default grid crosses beta in {0, 0.5, 1, 2, 5} with system dimensions
{2, 4, 6, 8} (unit-span ladder Hamiltonians, so the qubit case is diag(0, 1))
and every alphabet size n >= 2 dividing the dimension.  Each grid point is
evaluated once with the uniform register and twenty times with random
Dirichlet registers; on top of that a batch of randomized Haar-register
instances exercises the rank laws on joint states.

The outcome is a JSON-ready report with one entry per law:

    lemma1        rank(rho_S) rank(rho_R) <= n max_x rank(rho_x), the exact
                  joint-rank product, and dephasing never lowering rank
    theorem2      full-rank letter states with purity < 1 - 1e-9; linearly
                  dependent ensembles (beta = 0) still full rank
    theorem3      success probability of the block measurement == C_max on
                  every instance, the two-state closed-form optimum agreeing
                  at n = 2, and the stationarity/positivity certificate on
                  uniform-register instances
    eq15          l1 distance between output and input letters <= 1 - C_max
    eq16          I(X:Y) >= the Fano floor
    eq22          chi == S(system after) - S(system before)
    eq28          chi == beta Q - D with D >= 0
    chain         H(X) >= chi >= I(X:Y) >= floor
    ixy_le_betaQ  I(X:Y) <= beta Q

Each entry carries the worst residual seen and, on failure, the serialized
instance that produced it.  Everything is deterministic in the master seed.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .discriminate import (barnett_croke_certificate, c_max,
                           conditional_distribution, helstrom_oracle,
                           projective_povm, success_probability)
from .infotherm import (chain_inequality, fano_floor, holevo, l1_distance,
                        mutual_information, shannon_entropy)
from .protocol import ProtocolInstance
from .qmatrix import (LN2, dephase_register, numerical_rank, purity,
                      relative_entropy, von_neumann_entropy)
from .ranklaws import lemma1_check, linear_dependence
from .thermal import Hamiltonian

GRID_BETAS = (0.0, 0.5, 1.0, 2.0, 5.0)
GRID_DIMS = (2, 4, 6, 8)
SEEDS_PER_POINT = 20
LEMMA1_TRIALS = 200
IDENTITY_TOL = 1e-9
PURITY_MARGIN = 1e-9

REPORT_KEYS = ("lemma1", "theorem2", "theorem3", "eq15", "eq16", "eq22",
               "eq28", "chain", "ixy_le_betaQ")


def divisors_ge2(d: int) -> list[int]:
    return [n for n in range(2, d + 1) if d % n == 0]


@dataclass(frozen=True)
class VerifyConfig:
    """Grid shape for a verification run; defaults reproduce the full suite."""

    betas: tuple[float, ...] = GRID_BETAS
    system_dims: tuple[int, ...] = GRID_DIMS
    seeds_per_point: int = SEEDS_PER_POINT
    lemma1_trials: int = LEMMA1_TRIALS

    def __post_init__(self):
        if len(self.betas) == 0 or len(self.system_dims) == 0:
            raise ValueError("empty grid: need at least one beta and one dimension")
        if any(b < 0 or not np.isfinite(b) for b in self.betas):
            raise ValueError("betas must be finite and >= 0")
        if any(d < 2 for d in self.system_dims):
            raise ValueError("system dimensions must be >= 2")
        if not any(divisors_ge2(d) for d in self.system_dims):
            raise ValueError("empty grid: no dimension admits an alphabet size >= 2")
        if self.seeds_per_point < 0 or self.lemma1_trials < 0:
            raise ValueError("seeds_per_point and lemma1_trials must be >= 0")

    @classmethod
    def from_dict(cls, data: dict) -> "VerifyConfig":
        known = {"betas", "system_dims", "seeds_per_point", "lemma1_trials"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown verify config keys: {sorted(unknown)}")
        kwargs = {}
        if "betas" in data:
            kwargs["betas"] = tuple(float(b) for b in data["betas"])
        if "system_dims" in data:
            kwargs["system_dims"] = tuple(int(d) for d in data["system_dims"])
        if "seeds_per_point" in data:
            kwargs["seeds_per_point"] = int(data["seeds_per_point"])
        if "lemma1_trials" in data:
            kwargs["lemma1_trials"] = int(data["lemma1_trials"])
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {"betas": list(self.betas), "system_dims": list(self.system_dims),
                "seeds_per_point": self.seeds_per_point,
                "lemma1_trials": self.lemma1_trials}

    def points(self) -> list[tuple[float, int, int]]:
        return [(beta, d, n) for beta in self.betas for d in self.system_dims
                for n in divisors_ge2(d)]


class _Tracker:
    """Worst residual per law, with the worst failing instance if any."""

    def __init__(self):
        self.max_residual = 0.0
        self.failed = False
        self.count = 0
        self.failing_instance = None
        self._fail_residual = -1.0

    def add(self, residual: float, ok: bool, instance: dict):
        self.count += 1
        residual = float(residual)
        if residual > self.max_residual:
            self.max_residual = residual
        if not ok:
            self.failed = True
            if residual > self._fail_residual:
                self._fail_residual = residual
                self.failing_instance = instance

    def to_dict(self) -> dict:
        out = {"pass": not self.failed, "max_residual": self.max_residual,
               "instances": self.count}
        if self.failed:
            out["failing_instance"] = self.failing_instance
        return out


def _register_probabilities(n: int, master_seed: int,
                            point_index: int, draw: int) -> np.ndarray:
    rng = np.random.default_rng([master_seed, point_index, draw])
    return rng.dirichlet(np.ones(n))


def _evaluate_point(args) -> dict:
    """All per-instance residuals for one (beta, d, n) grid point.

    Returns {law: [(residual, ok, instance_dict), ...]}.  Top-level function
    so a process pool can ship it.
    """
    beta, d, n, master_seed, point_index, seeds_per_point, inject = args
    h = Hamiltonian.ladder(d)
    records: dict[str, list] = {key: [] for key in REPORT_KEYS}

    canonical = ProtocolInstance(hamiltonian=h, beta=beta, n=n)
    povm = projective_povm(canonical.partition())
    if inject == "povm-mislabel":
        povm = povm.permuted(tuple((x + 1) % n for x in range(n)))

    registers = [None]  # canonical uniform register first
    for draw in range(seeds_per_point):
        registers.append(_register_probabilities(n, master_seed, point_index, draw))

    for draw_index, probs in enumerate(registers):
        inst = ProtocolInstance(hamiltonian=h, beta=beta, n=n, probabilities=probs)
        desc = json.loads(inst.to_json())
        _, ensemble = inst.encode()
        gamma = inst.system_state()
        rho_avg = ensemble.average
        cval = c_max(gamma, n)

        # theorem3: the success identity on every instance
        p_succ = success_probability(ensemble, povm)
        res3 = abs(p_succ - cval)
        records["theorem3"].append((res3, res3 <= IDENTITY_TOL, desc))

        cond = conditional_distribution(ensemble, povm)
        px = ensemble.probabilities
        hx = shannon_entropy(px)
        chi = holevo(ensemble)
        ixy = mutual_information(px, cond)
        floor = fano_floor(hx, cval, n)

        s_before = von_neumann_entropy(gamma)
        s_after = von_neumann_entropy(rho_avg)
        heat = float(np.trace(h.matrix @ (rho_avg - gamma)).real)
        beta_q = beta * heat / LN2
        rel = relative_entropy(rho_avg, gamma)

        res22 = abs(chi - (s_after - s_before))
        records["eq22"].append((res22, res22 <= IDENTITY_TOL, desc))
        res28 = max(abs(chi - (beta_q - rel)), -min(rel, 0.0))
        records["eq28"].append((res28, res28 <= IDENTITY_TOL, desc))
        res_bq = max(ixy - beta_q, 0.0)
        records["ixy_le_betaQ"].append((res_bq, res_bq <= IDENTITY_TOL, desc))

        p_y = cond.output_distribution(px)
        res15 = max(l1_distance(p_y, px) - (1.0 - cval), 0.0)
        records["eq15"].append((res15, res15 <= IDENTITY_TOL, desc))
        res16 = max(floor - ixy, 0.0)
        records["eq16"].append((res16, res16 <= IDENTITY_TOL, desc))
        link = chain_inequality(hx, chi, ixy, floor)
        res_chain = max(-min(link.slack_hx_chi, link.slack_chi_ixy,
                             link.slack_ixy_floor), 0.0)
        records["chain"].append((res_chain, link.holds, desc))

        if draw_index == 0:
            # optimality certificates hold for the uniform register; skewed
            # priors can beat the block measurement, so they are not claimed
            cert = barnett_croke_certificate(ensemble, povm)
            res_cert = max(cert.cross_residual,
                           max(-cert.positivity_residual, 0.0))
            records["theorem3"].append((res_cert, cert.passes, desc))
            if n == 2:
                hel = helstrom_oracle(px[0], ensemble.states[0],
                                      px[1], ensemble.states[1])
                res_h = abs(hel - cval)
                records["theorem3"].append((res_h, res_h <= IDENTITY_TOL, desc))

            ranks = [numerical_rank(rho).value for rho in ensemble.states]
            purities = [purity(rho) for rho in ensemble.states]
            rank_bad = sum(r != d for r in ranks)
            pur_res = max(max(purities) - (1.0 - PURITY_MARGIN), 0.0)
            ok2 = rank_bad == 0 and pur_res == 0.0
            if linear_dependence(ensemble):
                ok2 = ok2 and all(r == d for r in ranks)
            records["theorem2"].append((pur_res + rank_bad, ok2, desc))

    return records


def _lemma1_records(config: VerifyConfig, master_seed: int) -> list:
    records = []
    points = config.points()
    for trial in range(config.lemma1_trials):
        beta, d, n = points[trial % len(points)]
        inst = ProtocolInstance(hamiltonian=Hamiltonian.ladder(d), beta=beta,
                                n=n, register_mode="haar",
                                seed=int(np.random.default_rng(
                                    [master_seed, 104729, trial]).integers(2 ** 63)))
        desc = json.loads(inst.to_json())
        register = inst.register()
        system = inst.system_state()
        joint, ensemble = inst.encode()

        report = lemma1_check(register.state, system, ensemble)
        overshoot = max(report.lhs - report.rhs, 0)

        r_joint = numerical_rank(joint).value
        r_expect = (numerical_rank(register.state).value
                    * numerical_rank(system).value)
        rank_bad = int(r_joint != r_expect)

        dephased = dephase_register(joint, (register.dim, inst.system_dim))
        drop = max(r_joint - numerical_rank(dephased).value, 0)

        ok = report.holds and rank_bad == 0 and drop == 0
        records.append((float(overshoot + rank_bad + drop), ok, desc))
    return records


def run_verification(config: VerifyConfig, master_seed: int = 0,
                     parallel: int = 1, inject: str | None = None) -> dict:
    """Run every law over the grid; returns the JSON-ready report."""
    if inject not in (None, "povm-mislabel"):
        raise ValueError(f"unknown fault injection {inject!r}")
    tasks = [(beta, d, n, master_seed, index, config.seeds_per_point, inject)
             for index, (beta, d, n) in enumerate(config.points())]
    if parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(_evaluate_point, tasks))
    else:
        results = [_evaluate_point(t) for t in tasks]

    trackers = {key: _Tracker() for key in REPORT_KEYS}
    for point_records in results:
        for key, entries in point_records.items():
            for residual, ok, desc in entries:
                trackers[key].add(residual, ok, desc)
    for residual, ok, desc in _lemma1_records(config, master_seed):
        trackers["lemma1"].add(residual, ok, desc)

    checks = {key: trackers[key].to_dict() for key in REPORT_KEYS}
    report = {
        "config": config.to_dict(),
        "seed": master_seed,
        "checks": checks,
        "all_pass": all(c["pass"] for c in checks.values()),
    }
    if inject is not None:
        report["inject"] = inject
    return report


def render_report(report: dict) -> str:
    """Canonical byte-stable JSON rendering of a verification report."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
