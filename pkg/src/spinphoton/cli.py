"""Batch command-line front end.

Subcommands: reflectance | protocol | sweep | sample. Configuration comes from
a plain-text ``key = value`` file ('#' starts a comment); frequencies and
rates may be given in units of kappa with a ``_rel`` suffix. Data goes to
--out (or stdout) as CSV or JSON; human messages go to stderr. Exit codes:
0 success, 2 usage or configuration error, 1 internal error.

The environment variable SPINPHOTON_THREADS caps sweep parallelism.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .cavity import CavityParams, conditional_phase, reflect
from .gates import GateMode, IdealGate, RealisticGate
from .metrics import SWEEP_PARAMETERS, SweepSpec, run_sweep
from .protocols import (
    PROTOCOL_NAMES,
    ProtocolConfig,
    ProtocolResult,
    run_protocol,
)
from .qstate import DensityState, ProjectiveOutcome, PureState, sample_outcome


class ConfigError(ValueError):
    """Raised for malformed configuration files or flag values."""


_FLOAT_KEYS = {
    "cavity.g", "cavity.g_rel", "cavity.kappa", "cavity.gamma", "cavity.gamma_rel",
    "cavity.kappa_s", "cavity.kappa_s_rel", "cavity.omega_c", "cavity.omega_x",
    "cavity.omega_x_rel", "gate.delta_phi", "gate.detuning_rel", "noise.t_over_t2",
}
_COMPLEX_KEYS = {"alpha1", "beta1", "alpha2", "beta2"}
_INT_KEYS = {"seed", "trials", "ghz.n_photons"}
_STR_KEYS = {"gate.mode", "protocol"}
KNOWN_KEYS = _FLOAT_KEYS | _COMPLEX_KEYS | _INT_KEYS | _STR_KEYS

_REL_PAIRS = [
    ("cavity.g", "cavity.g_rel"),
    ("cavity.gamma", "cavity.gamma_rel"),
    ("cavity.kappa_s", "cavity.kappa_s_rel"),
    ("cavity.omega_x", "cavity.omega_x_rel"),
]


def parse_config_text(text: str) -> dict:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value
    return raw


def _convert(key: str, value: str):
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _COMPLEX_KEYS:
            return complex(value.replace(" ", ""))
        if key in _INT_KEYS:
            return int(value)
        return value
    except ValueError:
        raise ConfigError(f"cannot parse value for {key!r}: {value!r}")


@dataclass(frozen=True)
class RunConfig:
    protocol: str
    gate: GateMode
    cavity: CavityParams
    config: ProtocolConfig
    seed: int
    trials: int
    n_photons: int
    echo: dict


def resolve_config(raw: dict) -> RunConfig:
    vals = {k: _convert(k, v) for k, v in raw.items()}

    kappa = vals.get("cavity.kappa", 1.0)

    def cavity_value(key: str, default: float) -> float:
        rel = key + "_rel"
        if key in vals and rel in vals:
            raise ConfigError(f"both {key!r} and {rel!r} given")
        if rel in vals:
            return vals[rel] * kappa
        return vals.get(key, default)

    omega_c = vals.get("cavity.omega_c", 0.0)
    if "cavity.omega_x" in vals and "cavity.omega_x_rel" in vals:
        raise ConfigError("both 'cavity.omega_x' and 'cavity.omega_x_rel' given")
    if "cavity.omega_x_rel" in vals:  # offset from the cavity line, in kappa units
        omega_x = omega_c + vals["cavity.omega_x_rel"] * kappa
    else:
        omega_x = vals.get("cavity.omega_x", omega_c)
    cavity = CavityParams(
        g=cavity_value("cavity.g", 10.0 * kappa),
        kappa=kappa,
        gamma=cavity_value("cavity.gamma", 0.1 * kappa),
        omega_c=omega_c,
        omega_x=omega_x,
        kappa_s=cavity_value("cavity.kappa_s", 0.0),
    )

    mode_name = vals.get("gate.mode", "ideal")
    detuning_rel = vals.get("gate.detuning_rel", 0.5)
    if mode_name == "ideal":
        gate: GateMode = IdealGate(vals.get("gate.delta_phi", math.pi / 2))
    elif mode_name == "realistic":
        gate = RealisticGate(cavity, omega_c + detuning_rel * kappa)
    else:
        raise ConfigError(f"gate.mode must be 'ideal' or 'realistic', got {mode_name!r}")

    protocol = vals.get("protocol", "scheme-b")
    if protocol not in PROTOCOL_NAMES:
        raise ConfigError(
            f"unknown protocol {protocol!r} (valid: {', '.join(PROTOCOL_NAMES)})"
        )

    sq = 1.0 / math.sqrt(2.0)
    try:
        config = ProtocolConfig(
            gate=gate,
            alpha1=vals.get("alpha1", sq), beta1=vals.get("beta1", sq),
            alpha2=vals.get("alpha2", sq), beta2=vals.get("beta2", sq),
            t_over_t2=vals.get("noise.t_over_t2", 0.0),
            seed=vals.get("seed", 0),
        )
    except ValueError as exc:
        raise ConfigError(str(exc))

    trials = vals.get("trials", 1)
    n_photons = vals.get("ghz.n_photons", 3)

    echo: dict = {"protocol": protocol}
    if isinstance(gate, IdealGate):
        echo["gate"] = {"mode": "ideal", "delta_phi": gate.delta_phi}
    else:
        echo["gate"] = {
            "mode": "realistic",
            "detuning_rel": detuning_rel,
            "cavity": {
                "g": cavity.g, "kappa": cavity.kappa, "gamma": cavity.gamma,
                "kappa_s": cavity.kappa_s, "omega_c": cavity.omega_c,
                "omega_x": cavity.omega_x,
            },
        }
    echo["amplitudes"] = {
        "alpha1": _c2pair(config.alpha1), "beta1": _c2pair(config.beta1),
        "alpha2": _c2pair(config.alpha2), "beta2": _c2pair(config.beta2),
    }
    echo["noise"] = {"t_over_t2": config.t_over_t2}
    echo["seed"] = config.seed
    if protocol == "ghz":
        echo["ghz"] = {"n_photons": n_photons}

    return RunConfig(protocol, gate, cavity, config, config.seed, trials,
                     n_photons, echo)


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return resolve_config({})
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    return resolve_config(parse_config_text(text))


def _c2pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.17g}"


def parse_grid(spec: str) -> list[float]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be 'start:stop:count', got {spec!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
        n = int(parts[2])
    except ValueError:
        raise ConfigError(f"cannot parse grid {spec!r}")
    if n <= 0:
        raise ConfigError("empty range: grid count must be >= 1")
    return list(np.linspace(a, b, n))


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _sanitize(obj):
    """Replace NaN floats with None so the JSON stays standard."""
    if isinstance(obj, float) and math.isnan(obj):
        return None
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_sanitize(v) for v in obj]
    return obj


# --- subcommands -------------------------------------------------------------

def cmd_reflectance(args) -> int:
    run = load_config(args.config)
    grid = parse_grid(args.grid)
    params = run.cavity
    lines = ["detuning_rel,r_cold_re,r_cold_im,phase_cold,"
             "r_hot_re,r_hot_im,phase_hot,delta_phi"]
    for d in grid:
        omega = params.omega_c + d * params.kappa
        cold = reflect(params, omega, coupled=False)
        hot = reflect(params, omega, coupled=True)
        dphi = conditional_phase(params, omega)
        lines.append(",".join(_fmt(v) for v in (
            d, cold.r.real, cold.r.imag, cold.phase,
            hot.r.real, hot.r.imag, hot.phase, dphi,
        )))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _branch_payload(br) -> dict:
    state = br.state
    payload: dict = {
        "label": br.label,
        "probability": br.probability,
        "register": [str(q) for q in state.register],
        "basis": state.basis_strings(),
    }
    if isinstance(state, PureState):
        payload["amplitudes"] = [_c2pair(z) for z in state.amplitudes]
    else:
        payload["density_matrix"] = [[_c2pair(z) for z in row]
                                     for row in state.matrix]
    payload["fidelity"] = br.fidelity_vs_target
    payload["concurrence"] = br.concurrence
    payload["success_probability"] = br.success_probability
    return payload


def cmd_protocol(args) -> int:
    run = load_config(args.config)
    result = run_protocol(run.protocol, run.config, n_photons=run.n_photons)
    doc = {
        "protocol": run.protocol,
        "config": run.echo,
        "branches": [_branch_payload(b) for b in result.branches],
    }
    _emit(json.dumps(_sanitize(doc), indent=2) + "\n", args.out)
    return 0


def cmd_sweep(args) -> int:
    run = load_config(args.config)
    if args.sweep not in SWEEP_PARAMETERS:
        raise ConfigError(
            f"unknown swept parameter {args.sweep!r} "
            f"(valid: {', '.join(SWEEP_PARAMETERS)})"
        )
    grid = parse_grid(args.grid)
    spec = SweepSpec(parameter=args.sweep, grid=tuple(grid), config=run.config,
                     protocol=run.protocol, n_photons=run.n_photons)
    workers = int(os.environ.get("SPINPHOTON_THREADS", "1") or "1")
    rows = run_sweep(spec, max_workers=workers)
    lines = ["swept_name,swept_value,branch_label,probability,fidelity,"
             "concurrence,success_probability"]
    for r in rows:
        lines.append(",".join([
            r["swept_name"], _fmt(r["swept_value"]), r["branch_label"],
            _fmt(r["probability"]), _fmt(r["fidelity"]),
            _fmt(r["concurrence"]), _fmt(r["success_probability"]),
        ]))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_sample(args) -> int:
    run = load_config(args.config)
    trials = args.trials if args.trials is not None else run.trials
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    seed = args.seed if args.seed is not None else run.seed
    result = run_protocol(run.protocol, run.config, n_photons=run.n_photons)
    outcomes = [ProjectiveOutcome(b.label, b.probability, None)
                for b in result.branches]
    missing = 1.0 - sum(o.probability for o in outcomes)
    if missing > 1e-9:
        # photon loss in realistic mode: no detector fires
        outcomes.append(ProjectiveOutcome("no_detection", missing, None))
    rng = np.random.default_rng(seed)
    lines = ["trial_index,branch_label"]
    for i in range(trials):
        lines.append(f"{i},{sample_outcome(outcomes, rng).label}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# --- entry point -------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinphoton",
        description="Spin-photon entanglement protocol simulator (batch runs).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value config file")
    common.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    common.add_argument("--seed", type=int, default=None, help="override config seed")

    p_refl = sub.add_parser("reflectance", parents=[common],
                            help="cold/hot reflection sweep as CSV")
    p_refl.add_argument("--grid", required=True, metavar="a:b:n",
                        help="detuning grid in units of kappa")
    p_refl.set_defaults(func=cmd_reflectance)

    p_prot = sub.add_parser("protocol", parents=[common],
                            help="run one protocol, emit every branch as JSON")
    p_prot.set_defaults(func=cmd_protocol)

    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="sweep one parameter, emit per-branch CSV rows")
    p_sweep.add_argument("--sweep", required=True, metavar="NAME",
                         help=f"one of: {', '.join(SWEEP_PARAMETERS)}")
    p_sweep.add_argument("--grid", required=True, metavar="a:b:n")
    p_sweep.set_defaults(func=cmd_sweep)

    p_sample = sub.add_parser("sample", parents=[common],
                              help="seeded draws of detection outcomes as CSV")
    p_sample.add_argument("--trials", type=int, default=None)
    p_sample.set_defaults(func=cmd_sample)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
