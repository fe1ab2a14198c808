"""Command-line experiment runner.

Three subcommands, all driven by a JSON config document:

    thermocode encode --config exp.json [--seed S] [--out F] [--format csv|json]
        Build every configured protocol instance and write one record per
        instance: letter probabilities, conditional-state spectra, C_max, the
        measured channel p(y|x), the information quantities, and the heat
        ledger.

    thermocode verify [--config grid.json] [--seed S] [--out F] [--parallel k]
        Run the full law-by-law verification grid (the default grid reproduces
        the library's acceptance suite) and write a JSON report.  Exit code 0
        iff every law passes.

    thermocode sweep --config exp.json --quantity c_max --axis beta [--out F]
        Sweep one axis and emit plot-ready CSV (axis, value, bound_lo,
        bound_hi), with monotonicity checked where the theory demands it.

Exit codes: 0 success, 1 verification failure, 2 usage or config error.
Identical config + seed gives byte-identical output files; records never
contain timestamps and all randomness derives from explicit seeds.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .discriminate import (c_max, conditional_distribution, projective_povm,
                           success_probability)
from .infotherm import (fano_floor, holevo, l1_distance, mutual_information,
                        shannon_entropy, thermo_ledger)
from .protocol import ProtocolInstance
from .qmatrix import partial_trace
from .thermal import Hamiltonian
from .verify import VerifyConfig, render_report, run_verification

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

ENCODE_SCALARS = ("beta", "n", "copies", "register_mode", "register_seed",
                  "trial", "c_max", "p_succ", "h_x_bits", "chi_bits",
                  "mutual_information_bits", "fano_floor_bits",
                  "fano_floor_raw_bits", "l1_output_input",
                  "delta_s_system_bits", "delta_s_register_bits",
                  "beta_q_bits", "rel_entropy_bits", "beta_delta_f_bits")
ENCODE_VECTORS = ("p_x", "state_spectra", "cond_table")


@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed encode/sweep configuration."""

    hamiltonian: Hamiltonian
    betas: tuple[float, ...]
    ns: tuple[int, ...]
    copies: tuple[int, ...]
    register_mode: str
    probabilities: tuple[float, ...] | None
    register_seed: int | None
    trials: int
    output_path: str | None
    output_format: str

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ValueError("config must be a JSON object")
        known = {"energies", "betas", "ns", "copies", "register", "trials", "output"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "energies" not in data:
            raise ValueError("config needs 'energies'")
        h = Hamiltonian(np.asarray(data["energies"], dtype=float))
        betas = tuple(float(b) for b in data.get("betas", []))
        if not betas:
            raise ValueError("config needs a non-empty 'betas' list")
        ns = tuple(int(n) for n in data.get("ns", []))
        if not ns:
            raise ValueError("config needs a non-empty 'ns' list")
        if any(n < 2 for n in ns):
            raise ValueError("alphabet sizes must be >= 2")
        raw_copies = data.get("copies", 1)
        copies = tuple(int(c) for c in (raw_copies if isinstance(raw_copies, list)
                                        else [raw_copies]))
        if any(c < 1 for c in copies):
            raise ValueError("copies must be >= 1")
        for c in copies:
            for n in ns:
                if (h.dim ** c) % n != 0:
                    raise ValueError(f"alphabet size {n} does not divide "
                                     f"dimension {h.dim}^{c}")
        register = data.get("register", {"mode": "explicit"})
        mode = register.get("mode", "explicit")
        if mode not in ("explicit", "haar"):
            raise ValueError(f"unknown register mode {mode!r}")
        probs = register.get("probabilities")
        if probs is not None:
            if mode != "explicit":
                raise ValueError("probabilities are only valid for the explicit mode")
            probs = tuple(float(p) for p in probs)
            if any(len(probs) != n for n in ns):
                raise ValueError(f"{len(probs)} probabilities cannot serve "
                                 f"alphabet sizes {list(ns)}")
        seed = register.get("seed")
        if seed is not None:
            seed = int(seed)
        trials = int(data.get("trials", 1))
        if trials < 1:
            raise ValueError("trials must be >= 1")
        output = data.get("output", {})
        fmt = output.get("format", "csv")
        if fmt not in ("csv", "json"):
            raise ValueError(f"unknown output format {fmt!r}")
        return cls(hamiltonian=h, betas=betas, ns=ns, copies=copies,
                   register_mode=mode, probabilities=probs, register_seed=seed,
                   trials=trials, output_path=output.get("path"),
                   output_format=fmt)

    def instances(self, master_seed: int | None) -> list[tuple[dict, str]]:
        """All (metadata, instance-JSON) pairs, in deterministic order."""
        base_seed = master_seed if master_seed is not None else self.register_seed
        if self.register_mode == "haar" and base_seed is None:
            raise ValueError("haar register mode needs a seed "
                             "(config register.seed or --seed)")
        out = []
        for i_b, beta in enumerate(self.betas):
            for i_n, n in enumerate(self.ns):
                for i_c, copies in enumerate(self.copies):
                    for trial in range(self.trials):
                        if self.register_mode == "haar":
                            rng = np.random.default_rng(
                                [base_seed, i_b, i_n, i_c, trial])
                            seed = int(rng.integers(2 ** 63))
                            inst = ProtocolInstance(
                                hamiltonian=self.hamiltonian, beta=beta, n=n,
                                copies=copies, register_mode="haar", seed=seed)
                        else:
                            probs = (np.asarray(self.probabilities)
                                     if self.probabilities is not None else None)
                            inst = ProtocolInstance(
                                hamiltonian=self.hamiltonian, beta=beta, n=n,
                                copies=copies, probabilities=probs)
                        out.append(({"trial": trial}, inst.to_json()))
        return out


def instance_record(inst_json: str, trial: int = 0) -> dict:
    """Everything the encode command reports about one protocol instance."""
    inst = ProtocolInstance.from_json(inst_json)
    register = inst.register()
    system = inst.system_state()
    blocked = inst.blocked()
    joint, ensemble = inst.encode()
    povm = projective_povm(inst.partition())
    cond = conditional_distribution(ensemble, povm)

    px = ensemble.probabilities
    hx = shannon_entropy(px)
    cval = c_max(system, inst.n)
    ixy = mutual_information(px, cond)
    register_after = partial_trace(joint, (register.dim, inst.system_dim), keep=0)
    ledger = thermo_ledger(system, ensemble.average, register.state,
                           register_after, blocked.energies, inst.beta, ensemble)

    spectra = [sorted(np.linalg.eigvalsh(rho).real, reverse=True)
               for rho in ensemble.states]
    return {
        "beta": inst.beta,
        "n": inst.n,
        "copies": inst.copies,
        "register_mode": inst.register_mode,
        "register_seed": inst.seed,
        "trial": trial,
        "p_x": [float(p) for p in px],
        "state_spectra": [[float(v) for v in s] for s in spectra],
        "c_max": cval,
        "p_succ": success_probability(ensemble, povm),
        "cond_table": [[float(v) for v in row] for row in cond.matrix],
        "h_x_bits": hx,
        "chi_bits": ledger.holevo_chi,
        "mutual_information_bits": ixy,
        "fano_floor_bits": fano_floor(hx, cval, inst.n),
        "fano_floor_raw_bits": fano_floor(hx, cval, inst.n, clamp=False),
        "l1_output_input": l1_distance(cond.output_distribution(px), px),
        "delta_s_system_bits": ledger.delta_s_system,
        "delta_s_register_bits": ledger.delta_s_register,
        "beta_q_bits": ledger.beta_q,
        "rel_entropy_bits": ledger.rel_entropy,
        "beta_delta_f_bits": ledger.beta_delta_f,
    }


def _record_task(args) -> dict:
    inst_json, trial = args
    return instance_record(inst_json, trial)


def _join_vector(value) -> str:
    if isinstance(value, list) and value and isinstance(value[0], list):
        return "|".join(";".join(repr(float(v)) for v in row) for row in value)
    return ";".join(repr(float(v)) for v in value)


def _records_to_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ENCODE_SCALARS + ENCODE_VECTORS)
    for rec in records:
        row = []
        for key in ENCODE_SCALARS:
            value = rec[key]
            row.append(repr(value) if isinstance(value, float) else value)
        row.extend(_join_vector(rec[key]) for key in ENCODE_VECTORS)
        writer.writerow(row)
    return buf.getvalue()


def _write_output(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_config_file(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def cmd_encode(args) -> int:
    config = ExperimentConfig.from_dict(_load_config_file(args.config))
    tasks = [(inst_json, meta["trial"])
             for meta, inst_json in config.instances(args.seed)]
    if args.parallel > 1:
        with ProcessPoolExecutor(max_workers=args.parallel) as pool:
            records = list(pool.map(_record_task, tasks))
    else:
        records = [_record_task(t) for t in tasks]
    fmt = args.format or config.output_format
    if fmt == "json":
        text = json.dumps({"records": records}, sort_keys=True, indent=2) + "\n"
    else:
        text = _records_to_csv(records)
    _write_output(text, args.out or config.output_path)
    return EXIT_OK


def cmd_verify(args) -> int:
    data = _load_config_file(args.config) if args.config else {}
    config = VerifyConfig.from_dict(data)
    report = run_verification(config, master_seed=args.seed or 0,
                              parallel=args.parallel, inject=args.inject)
    _write_output(render_report(report), args.out)
    return EXIT_OK if report["all_pass"] else EXIT_FAIL


SWEEP_QUANTITIES = ("c_max", "holevo", "mutual_info", "p_succ")
SWEEP_AXES = ("beta", "n", "copies")


def _sweep_rows(config: ExperimentConfig, quantity: str, axis: str,
                master_seed: int | None) -> list[tuple[float, float, float, float]]:
    if axis == "beta":
        values = sorted(set(config.betas))
    elif axis == "n":
        values = sorted(set(config.ns))
    else:
        values = sorted(set(config.copies))
    if len(values) < 2:
        raise ValueError(f"axis {axis!r} needs at least two values to sweep")

    rows = []
    for value in values:
        beta = value if axis == "beta" else config.betas[0]
        n = value if axis == "n" else config.ns[0]
        copies = value if axis == "copies" else config.copies[0]
        probs = None
        if config.probabilities is not None and len(config.probabilities) == n:
            probs = np.asarray(config.probabilities)
        if config.register_mode == "haar":
            seed = master_seed if master_seed is not None else config.register_seed
            if seed is None:
                raise ValueError("haar register mode needs a seed")
            inst = ProtocolInstance(hamiltonian=config.hamiltonian, beta=beta,
                                    n=n, copies=copies, register_mode="haar",
                                    seed=seed)
        else:
            inst = ProtocolInstance(hamiltonian=config.hamiltonian, beta=beta,
                                    n=n, copies=copies, probabilities=probs)
        _, ensemble = inst.encode()
        povm = projective_povm(inst.partition())
        px = ensemble.probabilities
        cval = c_max(inst.system_state(), n)
        if quantity == "c_max":
            q, lo, hi = cval, 1.0 / n, 1.0
        elif quantity == "p_succ":
            q, lo, hi = success_probability(ensemble, povm), 1.0 / n, 1.0
        elif quantity == "holevo":
            q, lo, hi = holevo(ensemble), 0.0, shannon_entropy(px)
        else:
            cond = conditional_distribution(ensemble, povm)
            hx = shannon_entropy(px)
            q = mutual_information(px, cond)
            lo, hi = fano_floor(hx, cval, n), holevo(ensemble)
        rows.append((float(value), float(q), float(lo), float(hi)))
    return rows


def _sweep_monotone_violation(config: ExperimentConfig, quantity: str,
                              axis: str, rows) -> str | None:
    # C_max must rise strictly with beta when the top block boundary is gapped
    if quantity != "c_max" or axis != "beta" or config.copies[0] != 1:
        return None
    d_x = config.hamiltonian.dim // config.ns[0]
    e = config.hamiltonian.energies
    if e[d_x] <= e[d_x - 1]:
        return None
    for (b0, v0, _, _), (b1, v1, _, _) in zip(rows, rows[1:]):
        if v1 <= v0:
            return (f"c_max failed to increase from beta={b0!r} ({v0!r}) "
                    f"to beta={b1!r} ({v1!r})")
    return None


def cmd_sweep(args) -> int:
    config = ExperimentConfig.from_dict(_load_config_file(args.config))
    rows = _sweep_rows(config, args.quantity, args.axis, args.seed)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["axis", "value", "bound_lo", "bound_hi"])
    for row in rows:
        writer.writerow([repr(v) for v in row])
    _write_output(buf.getvalue(), args.out)
    violation = _sweep_monotone_violation(config, args.quantity, args.axis, rows)
    if violation:
        print(f"thermocode sweep: {violation}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermocode",
        description="Thermal-state encoding experiments: encode, verify, sweep.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required):
        p.add_argument("--config", required=config_required,
                       help="path to the JSON config document")
        p.add_argument("--seed", type=int, default=None,
                       help="master seed overriding the config seed")
        p.add_argument("--out", default=None,
                       help="output file (default: stdout)")
        p.add_argument("--parallel", type=int, default=1,
                       help="worker processes for independent instances")

    p_enc = sub.add_parser("encode", help="run instances and write records")
    common(p_enc, config_required=True)
    p_enc.add_argument("--format", choices=("csv", "json"), default=None,
                       help="record format (default: config output.format or csv)")

    p_ver = sub.add_parser("verify", help="run the verification grid")
    common(p_ver, config_required=False)
    p_ver.add_argument("--inject", choices=("povm-mislabel",), default=None,
                       help="deliberately fault the decoder to watch the "
                            "verification fail")

    p_sw = sub.add_parser("sweep", help="sweep one axis and emit CSV")
    common(p_sw, config_required=True)
    p_sw.add_argument("--quantity", choices=SWEEP_QUANTITIES, required=True)
    p_sw.add_argument("--axis", choices=SWEEP_AXES, required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "encode":
            return cmd_encode(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_sweep(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"thermocode {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
