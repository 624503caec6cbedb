"""Command-line front end: ``spinqec CONFIG.json [--out PATH] [--format csv|json] [--seed N]``.

The config is one JSON object whose ``command`` field selects the run:

``solve-detuning``
    ``g``, ``gamma`` (0.1), ``kappa_s`` (0), ``target`` ("minus", "plus" or
    radians), optional ``bracket`` and ``n_scan``.
``confidence-sweep``
    ``g``, ``gamma``, ``kappa_s``, ``delta`` grid, ``p_star`` grid,
    ``readout`` list, ``kind``, ``distance`` (2), optional ``weight``.
``entangle-sweep``
    ``g``, ``gamma1``, ``gamma2`` (or ``gamma_ratio``), ``kappa_s``,
    ``delta_energy`` grid, ``mode``.
``syndrome-sim``
    ``distance``, ``channel`` ({x, y, z}), ``model``, ``shots``, ``seed``.

A grid is a number, a list, or ``{"start", "stop", "num"}``.
Exit status: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .cavity import CavitySystem, phase_difference, solve_detuning, wrap_phase
from .entanglement import EntanglementMode, QDPair, efficiency_sweep
from .errors import ConfigParse, NoRootInBracket, SpinQECError, ZeroProbabilityReadout
from .io import to_csv, to_json
from .lattice import build_planar
from .quantum import PauliChannel
from .sweeps import confidence_sweep
from .syndrome import InteractionModel, outcome_probabilities, sample_syndromes

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class Config:
    """Typed access to a parsed config with field-level diagnostics."""

    def __init__(self, data, where="config"):
        if not isinstance(data, dict):
            raise ConfigParse(f"{where}: expected a JSON object")
        self.data = data
        self.where = where

    def _fail(self, key, msg):
        raise ConfigParse(f"{self.where}: field '{key}': {msg}")

    def number(self, key, default=None, *, minimum=None, integer=False):
        if key not in self.data:
            if default is None:
                self._fail(key, "required")
            return default
        v = self.data[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self._fail(key, f"expected a number, got {v!r}")
        if integer and int(v) != v:
            self._fail(key, f"expected an integer, got {v!r}")
        if minimum is not None and v < minimum:
            self._fail(key, f"must be >= {minimum}, got {v!r}")
        return int(v) if integer else float(v)

    def choice(self, key, options, default=None):
        v = self.data.get(key, default)
        if v is None:
            self._fail(key, "required")
        if v not in options:
            self._fail(key, f"expected one of {sorted(options)}, got {v!r}")
        return v

    def grid(self, key, default=None):
        if key not in self.data:
            if default is None:
                self._fail(key, "required")
            return np.asarray(default, dtype=float)
        v = self.data[key]
        if isinstance(v, bool):
            self._fail(key, "expected a number, list or {start, stop, num}")
        if isinstance(v, (int, float)):
            return np.array([float(v)])
        if isinstance(v, list):
            if not v or not all(isinstance(x, (int, float)) and not isinstance(x, bool)
                                for x in v):
                self._fail(key, "expected a non-empty list of numbers")
            return np.array(v, dtype=float)
        if isinstance(v, dict):
            sub = Config(v, f"{self.where}.{key}")
            num = sub.number("num", integer=True, minimum=1)
            return np.linspace(sub.number("start"), sub.number("stop"), num)
        self._fail(key, "expected a number, list or {start, stop, num}")

    def section(self, key):
        if key not in self.data:
            self._fail(key, "required")
        return Config(self.data[key], f"{self.where}.{key}")


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigParse(f"{path}: cannot read config: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParse(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    cfg = Config(data, str(path))
    cfg.choice("command", COMMANDS)
    return cfg


def _target(cfg):
    t = cfg.data.get("target", "minus")
    if t == "minus":
        return -np.pi / 2
    if t == "plus":
        return np.pi / 2
    return cfg.number("target")


def _system(cfg, gamma_key="gamma"):
    try:
        return CavitySystem.resonant(cfg.number("g", minimum=0),
                                     cfg.number(gamma_key, 0.1),
                                     cfg.number("kappa_s", 0.0, minimum=0))
    except ValueError as exc:
        raise ConfigParse(f"{cfg.where}: {exc}") from None


def cmd_solve_detuning(cfg, seed=None):
    sys_ = _system(cfg)
    target = _target(cfg)
    bracket = cfg.data.get("bracket")
    if bracket is not None and (not isinstance(bracket, list) or len(bracket) != 2):
        raise ConfigParse(f"{cfg.where}: field 'bracket': expected [lo, hi]")
    roots = solve_detuning(sys_, target, bracket=bracket,
                           n_scan=cfg.number("n_scan", 4096, integer=True, minimum=2))
    rows = []
    for r in roots:
        phi = float(phase_difference(sys_, r))
        rows.append({"delta": r, "phase": phi,
                     "residual": float(wrap_phase(phi - target))})
    return ["delta", "phase", "residual"], rows, {"target": target}


def cmd_confidence_sweep(cfg, seed=None):
    kind = cfg.choice("kind", {"plaquette", "star"}, "plaquette")
    distance = cfg.number("distance", 2, integer=True, minimum=2)
    weight = cfg.data.get("weight")
    if weight is not None:
        weight = cfg.number("weight", integer=True)
    readouts = cfg.data.get("readout", ["+", "-"])
    if not isinstance(readouts, list) or not readouts or any(r not in ("+", "-")
                                                             for r in readouts):
        raise ConfigParse(f"{cfg.where}: field 'readout': expected a list of '+'/'-'")
    lattice = build_planar(distance)
    if lattice.num_qubits > 13:
        raise ConfigParse(f"{cfg.where}: field 'distance': lattice exceeds 13 data qubits")
    target = _target(cfg)
    rows = []
    for g in cfg.grid("g"):
        sys_ = _system(Config({**cfg.data, "g": float(g)}, cfg.where))
        model = InteractionModel.physical(sys_, delta=cfg.grid("delta")[0],
                                          phase_sign=1 if target > 0 else -1)
        res = confidence_sweep(lattice, model, cfg.grid("delta"),
                               cfg.grid("p_star", [0.0]),
                               [1 if r == "+" else -1 for r in readouts],
                               kind, weight)
        for row in res.rows():
            rows.append({"delta": row["delta"], "g": row["g"], "p_star": row["p_star"],
                         "readout": "+" if row["readout"] > 0 else "-",
                         "confidence": row["confidence"],
                         "flag": "zero_probability" if row["zero_probability"] else ""})
    return ["delta", "g", "p_star", "readout", "confidence", "flag"], rows, {}


def cmd_entangle_sweep(cfg, seed=None):
    gamma1 = cfg.number("gamma1", 0.1)
    if "gamma2" in cfg.data:
        gamma2 = cfg.number("gamma2")
    else:
        gamma2 = gamma1 * cfg.number("gamma_ratio", 1.0)
    try:
        template = QDPair.from_detuning(0.0, g=cfg.number("g", minimum=0),
                                        gamma1=gamma1, gamma2=gamma2,
                                        kappa_s=cfg.number("kappa_s", 0.0, minimum=0))
    except ValueError as exc:
        raise ConfigParse(f"{cfg.where}: {exc}") from None
    mode = EntanglementMode(cfg.choice("mode", {"antisymmetric", "symmetric"},
                                       "antisymmetric"))
    res = efficiency_sweep(template, cfg.grid("delta_energy"), mode)
    rows = []
    for row in res.rows():
        row["flag"] = "no_root" if row.pop("gap") else ""
        rows.append(row)
    return (["delta_energy", "probe_frequency", "eta", "eta_ratio", "fidelity", "flag"],
            rows, {})


def _model(cfg):
    mode = cfg.choice("mode", {"ideal", "physical"}, "ideal")
    if mode == "ideal":
        sign = cfg.choice("phase_sign", {1, -1}, 1)
        return InteractionModel.ideal(sign)
    sys_ = _system(cfg)
    delta = cfg.number("delta") if "delta" in cfg.data else None
    return InteractionModel.physical(sys_, delta, target=_target(cfg))


def cmd_syndrome_sim(cfg, seed=None):
    if seed is None:
        if "seed" not in cfg.data:
            cfg._fail("seed", "required for sampling")
        seed = cfg.number("seed", integer=True, minimum=0)
    shots = cfg.number("shots", integer=True, minimum=1)
    lattice = build_planar(cfg.number("distance", 2, integer=True, minimum=2))
    ch = cfg.section("channel")
    try:
        channel = PauliChannel(ch.number("x", 0.0), ch.number("y", 0.0), ch.number("z", 0.0))
    except ValueError as exc:
        raise ConfigParse(f"{ch.where}: {exc}") from None
    model = _model(cfg.section("model")) if "model" in cfg.data else InteractionModel.ideal()
    tally = sample_syndromes(lattice, channel, model, shots, seed)
    rows = []
    for rec, stab in zip(tally.records(), tally.stabilizers):
        exact = outcome_probabilities(lattice, channel, model, stabilizer=stab)
        rec["empirical_minus_rate"] = rec["minus"] / shots
        rec["exact_minus_rate"] = exact[-1]
        rec["exact_loss_rate"] = exact["loss"]
        rows.append(rec)
    columns = ["stab_id", "kind", "weight", "plus", "minus", "heralded_loss", "shots",
               "empirical_minus_rate", "exact_minus_rate", "exact_loss_rate"]
    return columns, rows, {"seed": seed, "shots": shots, "distance": lattice.distance}


COMMANDS = {
    "solve-detuning": (cmd_solve_detuning, "csv"),
    "confidence-sweep": (cmd_confidence_sweep, "csv"),
    "entangle-sweep": (cmd_entangle_sweep, "csv"),
    "syndrome-sim": (cmd_syndrome_sim, "json"),
}


def run(config_path, out=None, fmt=None, seed=None) -> str:
    """Execute one config and return the rendered output (also written to ``out``)."""
    cfg = load_config(config_path)
    command = cfg.data["command"]
    func, default_fmt = COMMANDS[command]
    columns, rows, meta = func(cfg, seed)
    fmt = fmt or cfg.data.get("format", default_fmt)
    if fmt == "csv":
        text = to_csv(rows, columns)
    elif fmt == "json":
        text = to_json({"command": command, "columns": columns, "rows": rows, **meta})
    else:
        raise ConfigParse(f"{config_path}: field 'format': expected csv or json, got {fmt!r}")
    out = out or cfg.data.get("out")
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="spinqec", description=__doc__.splitlines()[0])
    parser.add_argument("config", help="JSON run configuration")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=["csv", "json"], dest="fmt")
    parser.add_argument("--seed", type=int, help="override the config seed")
    args = parser.parse_args(argv)
    try:
        text = run(args.config, args.out, args.fmt, args.seed)
    except ConfigParse as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NoRootInBracket, ZeroProbabilityReadout) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except SpinQECError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
