"""speclimit command line: config loading, analyses, deterministic outputs.

Subcommands: spectrum, criterion, noise, simulate, report. Each reads one
JSON config, writes CSV/JSON files plus a run_record.json manifest with
sha256 digests, and exits 0 on success, 2 on a config error, 3 on a
computation error (one machine-readable JSON error line on stderr).

All numbers are printed with 12 significant digits so reruns with the same
config, seed, and version are byte-identical. The output directory is taken
from --out, then $SPECLIMIT_OUT, then the config's output_dir, then
./speclimit-out.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import csv

import numpy as np

from . import __version__
from . import semiclassical
from .criterion import classify
from .errors import ConfigError, SpeclimitError
from .models import ModelSpec, bound_levels, classical_period, model_from_dict, n_max, n_min
from .noise import (
    characteristic_check,
    reconstruct_state,
    required_noise_product_for_resolution,
    sample_ensemble,
)
from .simulate import D_PRIME_CUT, PeriodProtocol, consistency_sweep

SCHEMA_VERSION = "1"
DEFAULT_OUT = "speclimit-out"
ANALYSES = ("spectrum", "criterion", "noise", "simulate", "report")

_COMMON_KEYS = ("model", "analysis", "output_dir", "seed")
_ANALYSIS_KEYS = {
    "spectrum": ("n_limit", "semiclassical_check"),
    "criterion": ("n_range", "method"),
    "noise": ("noise",),
    "simulate": ("n_range", "protocol"),
    "report": ("n_limit", "n_range", "method", "semiclassical_check"),
}
_NOISE_DEFAULTS = {
    "position_center": 2.0,
    "momentum_center": -1.0,
    "delta_x": 0.5,
    "delta_p": 1.2,
    "count": 100000,
}
_GRID_WIDTH_FACTORS = (0.5, 0.75, 1.0, 1.5)
_GRID_U_VALUES = (0.25, 0.5, 1.0, 1.5, 2.0)


# -- formatting ------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def _round12(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return float(format(obj, ".12g"))
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


class OutputWriter:
    """Writes output files under one directory and keeps a digest manifest."""

    def __init__(self, outdir: Path):
        self.outdir = outdir
        self.entries: list[dict] = []

    def _register(self, name: str):
        data = (self.outdir / name).read_bytes()
        self.entries.append({"name": name, "sha256": hashlib.sha256(data).hexdigest(), "bytes": len(data)})

    def write_csv(self, name: str, header, rows):
        with open(self.outdir / name, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
        self._register(name)

    def write_json(self, name: str, obj):
        text = json.dumps(_round12(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"
        (self.outdir / name).write_text(text)
        self._register(name)

    def adopt(self, name: str):
        """Pick up a file some other component already wrote into outdir."""
        self._register(name)

    def write_record(self, analysis: str, config_doc, seed: int, started: str):
        record = {
            "tool": "speclimit",
            "version": __version__,
            "schema": SCHEMA_VERSION,
            "analysis": analysis,
            "config": config_doc,
            "seed": seed,
            "started_utc": started,
            "finished_utc": _utcnow(),
            "outputs": self.entries,
        }
        text = json.dumps(_round12(record), indent=2, sort_keys=True, allow_nan=False) + "\n"
        (self.outdir / "run_record.json").write_text(text)


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# -- config ------------------------------------------------------------


def load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config", f"expected a JSON object, got {type(doc).__name__}")
    return doc


def _check_keys(doc: dict, allowed, path: str):
    for key in doc:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}" if path else key, "unknown key")


def _opt_bool(doc, key, default):
    v = doc.get(key, default)
    if not isinstance(v, bool):
        raise ConfigError(key, f"expected true or false, got {v!r}")
    return v


def _opt_int(doc, key, default, lo=None, hi=None, path=""):
    v = doc.get(key, default)
    if v is None:
        return None
    full = f"{path}.{key}" if path else key
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(full, f"expected an integer, got {v!r}")
    if (lo is not None and v < lo) or (hi is not None and v > hi):
        raise ConfigError(full, f"must be in [{lo}, {hi}], got {v}")
    return v


def _opt_number(doc, key, default, minimum=None, path="", allow_none=False):
    v = doc.get(key, default)
    if v is None and allow_none:
        return None
    full = f"{path}.{key}" if path else key
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(full, f"must be a finite number, got {v!r}")
    if minimum is not None and v < minimum:
        raise ConfigError(full, f"must be >= {minimum}, got {v}")
    return float(v)


def _opt_n_range(doc, model: ModelSpec):
    v = doc.get("n_range")
    first = n_min(model) + 1
    if v is None:
        hi = first + 18
        cap = n_max(model)
        if cap is not None:
            hi = min(hi, cap)
        return (first, hi)
    if (not isinstance(v, list) or len(v) != 2
            or any(isinstance(x, bool) or not isinstance(x, int) for x in v)):
        raise ConfigError("n_range", f"expected [lo, hi] with two integers, got {v!r}")
    lo, hi = v
    if lo < first:
        raise ConfigError("n_range", f"lo must be >= {first} for this model, got {lo}")
    if hi < lo:
        raise ConfigError("n_range", f"hi must be >= lo, got {v!r}")
    return (lo, hi)


def validate_config(doc: dict, analysis: str) -> dict:
    allowed = _COMMON_KEYS + _ANALYSIS_KEYS[analysis]
    _check_keys(doc, allowed, "")
    if "model" not in doc:
        raise ConfigError("model", "missing required key")
    model = model_from_dict(doc["model"])
    declared = doc.get("analysis")
    if declared is not None and declared != analysis:
        raise ConfigError("analysis", f"config declares {declared!r} but the {analysis!r} command was invoked")
    out = {"model": model}
    od = doc.get("output_dir")
    if od is not None and not isinstance(od, str):
        raise ConfigError("output_dir", f"expected a string, got {od!r}")
    out["output_dir"] = od
    out["seed"] = _opt_int(doc, "seed", None, lo=0, hi=2**64 - 1)

    if analysis in ("spectrum", "report"):
        out["n_limit"] = _opt_int(doc, "n_limit", None, lo=1)
        out["semiclassical_check"] = _opt_bool(doc, "semiclassical_check", False)
    if analysis in ("criterion", "simulate", "report"):
        out["n_range"] = _opt_n_range(doc, model)
    if analysis in ("criterion", "report"):
        method = doc.get("method", "auto")
        if method not in ("auto", "closed", "semiclassical"):
            raise ConfigError("method", f"expected auto, closed, or semiclassical, got {method!r}")
        out["method"] = method
    if analysis == "noise":
        sub = doc.get("noise", {})
        if not isinstance(sub, dict):
            raise ConfigError("noise", f"expected an object, got {sub!r}")
        _check_keys(sub, tuple(_NOISE_DEFAULTS), "noise")
        out["noise"] = {
            "position_center": _opt_number(sub, "position_center", _NOISE_DEFAULTS["position_center"], path="noise"),
            "momentum_center": _opt_number(sub, "momentum_center", _NOISE_DEFAULTS["momentum_center"], path="noise"),
            "delta_x": _opt_number(sub, "delta_x", _NOISE_DEFAULTS["delta_x"], minimum=0.0, path="noise"),
            "delta_p": _opt_number(sub, "delta_p", _NOISE_DEFAULTS["delta_p"], minimum=0.0, path="noise"),
            "count": _opt_int(sub, "count", _NOISE_DEFAULTS["count"], lo=2, path="noise"),
        }
    if analysis == "simulate":
        sub = doc.get("protocol", {})
        if not isinstance(sub, dict):
            raise ConfigError("protocol", f"expected an object, got {sub!r}")
        _check_keys(sub, ("s", "delta_t", "trials", "per_inversion"), "protocol")
        out["protocol"] = {
            "s": _opt_int(sub, "s", 1, lo=1, path="protocol"),
            "delta_t": _opt_number(sub, "delta_t", None, minimum=0.0, path="protocol", allow_none=True),
            "trials": _opt_int(sub, "trials", 10000, lo=10, path="protocol"),
            "per_inversion": _opt_bool(sub, "per_inversion", False),
        }
    return out


# -- analyses ------------------------------------------------------------


def _spectrum_rows(model: ModelSpec, n_limit: int, semi_check: bool):
    rows = []
    for lv in bound_levels(model, n_limit):
        if model.kind == "numeric":
            tau = semiclassical.period_of_energy(model, lv.energy, self_check=False)
        else:
            tau = classical_period(model, lv.n).tau
        row = [lv.n, lv.energy, tau]
        if semi_check:
            row.append(semiclassical.quantize(model, lv.n).energy)
        rows.append(row)
    return rows


def cmd_spectrum(model: ModelSpec, cfg: dict, w: OutputWriter, seed: int):
    semi = cfg["semiclassical_check"]
    rows = _spectrum_rows(model, cfg["n_limit"] or 10, semi)
    header = ["n", "E_n", "tau_n"] + (["E_semiclassical"] if semi else [])
    w.write_csv("spectrum.csv", header, rows)


def _criterion_outputs(model: ModelSpec, n_range, method, w: OutputWriter, prefix=""):
    rep = classify(model, n_range, method)
    w.write_csv(
        prefix + "criterion.csv",
        ["n", "E_n", "tau_n", "dE", "dTau", "y_over_hbar", "resolvable"],
        rep.csv_rows(),
    )
    w.write_csv(
        prefix + "y_curve.csv",
        ["n", "y_over_hbar", "half"],
        [(g.n, g.y_over_hbar, 0.5) for g in rep.gaps],
    )
    summary = {"analysis": "criterion", "model": model.to_dict(), "n_range": list(n_range)}
    summary.update(rep.to_json_dict())
    w.write_json(prefix + "criterion_summary.json", summary)
    return rep


def cmd_criterion(model: ModelSpec, cfg: dict, w: OutputWriter, seed: int):
    _criterion_outputs(model, cfg["n_range"], cfg["method"], w)


def _trapezoid(y: np.ndarray, dx: float) -> float:
    return float(dx * (np.sum(y) - 0.5 * (y[0] + y[-1])))


def cmd_noise(model: ModelSpec, cfg: dict, w: OutputWriter, seed: int):
    ns = cfg["noise"]
    hbar = model.units.hbar
    pos = sample_ensemble(ns["position_center"], ns["delta_x"], ns["count"], seed, stream=0)
    mom = sample_ensemble(ns["momentum_center"], ns["delta_p"], ns["count"], seed, stream=1)
    pos.to_csv(w.outdir / "position_ensemble.csv")
    w.adopt("position_ensemble.csv")
    mom.to_csv(w.outdir / "momentum_ensemble.csv")
    w.adopt("momentum_ensemble.csv")
    state = reconstruct_state(pos, mom, hbar)

    norm_residual = None
    if state.delta_x > 0.0:
        x, dx = np.linspace(state.r - 8.0 * state.delta_x, state.r + 8.0 * state.delta_x,
                            20001, retstep=True)
        norm_residual = abs(_trapezoid(state.position_density(x), dx) - 1.0)

    rows = []
    deviations = []
    for j, factor in enumerate(_GRID_WIDTH_FACTORS):
        dxv = factor * ns["delta_x"]
        ens = sample_ensemble(0.0, dxv, ns["count"], seed, stream=2 + j)
        for u in _GRID_U_VALUES:
            p = u * hbar / dxv if dxv > 0.0 else u
            chk = characteristic_check(ens, p, hbar)
            rows.append((chk.p, chk.delta_x, chk.mc_real, chk.mc_imag, chk.exact,
                         chk.se_real, chk.se_imag, chk.within_3se))
            if chk.se_real > 0.0:
                deviations.append(abs(chk.mc_real - chk.exact) / chk.se_real)
    w.write_csv(
        "characteristic_check.csv",
        ["p", "delta_x", "mc_real", "mc_imag", "exact", "se_real", "se_imag", "within_3se"],
        rows,
    )

    summary = {
        "analysis": "noise",
        "model": model.to_dict(),
        "hbar": hbar,
        "count": ns["count"],
        "position": {"true_center": pos.true_center, "true_sigma": pos.sigma,
                     "estimated_center": state.r, "estimated_width": state.delta_x},
        "momentum": {"true_center": mom.true_center, "true_sigma": mom.sigma,
                     "estimated_center": state.d, "estimated_width": state.delta_p},
        "product_over_hbar": state.budget.product_over_hbar,
        "preparable": state.budget.preparable,
        "sub_sql": state.sub_sql,
        "normalization_residual": norm_residual,
        "characteristic": {
            "rows": len(rows),
            "all_within_3se": all(r[-1] for r in rows),
            "max_deviation_over_se": max(deviations, default=0.0),
        },
    }
    if model.kind == "harmonic":
        products = [(n, required_noise_product_for_resolution(model, n)) for n in range(25)]
        w.write_csv("required_product.csv", ["n", "product_over_hbar"], products)
        summary["required_product"] = {
            "levels": len(products),
            "max_over_hbar": max(p for _, p in products),
            "all_below_half": all(p < 0.5 for _, p in products),
        }
    w.write_json("noise_summary.json", summary)


def cmd_simulate(model: ModelSpec, cfg: dict, w: OutputWriter, seed: int):
    lo, hi = cfg["n_range"]
    lo = max(lo, n_min(model) + 1)
    cap = n_max(model)
    if cap is not None:
        hi = min(hi, cap)
    p = cfg["protocol"]
    protocol = PeriodProtocol(s=p["s"], delta_t=p["delta_t"], trials=p["trials"],
                              seed=seed, per_inversion=p["per_inversion"])
    summary = consistency_sweep(model, (lo, hi), protocol)
    ys = dict(summary.y_values)
    w.write_csv(
        "sweep.csv",
        ["n", "tau_n", "d_prime", "bayes_error", "mc_resolvable", "y_over_hbar", "criterion_resolvable"],
        [(r.n_high, r.tau_high, r.d_prime, r.bayes_error, r.mc_resolvable,
          ys[r.n_high], r.criterion_resolvable) for r in summary.results],
    )
    w.write_json("simulate_summary.json", {
        "analysis": "simulate",
        "model": model.to_dict(),
        "n_range": [lo, hi],
        "protocol": {"s": protocol.s, "delta_t": protocol.delta_t, "trials": protocol.trials,
                     "per_inversion": protocol.per_inversion, "delta_t_mode": summary.delta_t_mode},
        "seed": seed,
        "d_prime_cut": D_PRIME_CUT,
        "mc_crossover": summary.mc_crossover,
        "criterion_threshold": summary.criterion_threshold,
        "crossover_within_one": summary.crossover_within_one,
        "agreements": summary.agreements,
        "disagreements": summary.disagreements,
        "agreement_by_n": [[n, ok] for n, ok in summary.agreement_by_n],
        "sensitivity": [[cut, cross] for cut, cross in summary.sensitivity],
    })


def cmd_report(model: ModelSpec, cfg: dict, w: OutputWriter, seed: int):
    n_range = cfg["n_range"]
    n_limit = cfg["n_limit"] or max(10, n_range[1])
    semi = cfg["semiclassical_check"]
    rows = _spectrum_rows(model, n_limit, semi)
    header = ["n", "E_n", "tau_n"] + (["E_semiclassical"] if semi else [])
    w.write_csv("spectrum.csv", header, rows)
    rep = _criterion_outputs(model, n_range, cfg["method"], w)
    w.write_json("report.json", {
        "analysis": "report",
        "model": model.to_dict(),
        "hbar": model.units.hbar,
        "level_count": len(rows),
        "threshold": rep.threshold,
        "regime": rep.regime,
        "max_y_over_hbar": max((g.y_over_hbar for g in rep.gaps), default=0.0),
        "notes": list(rep.notes),
        "outputs": [e["name"] for e in w.entries],
    })


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "criterion": cmd_criterion,
    "noise": cmd_noise,
    "simulate": cmd_simulate,
    "report": cmd_report,
}


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="speclimit",
        description="Resolvability of discrete bound spectra under classical energy and period measurements.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__} (schema {SCHEMA_VERSION})")
    sub = parser.add_subparsers(dest="analysis", required=True)
    descriptions = {
        "spectrum": "tabulate energy levels and classical periods",
        "criterion": "evaluate the y(n) resolvability criterion",
        "noise": "Gaussian measurement-noise ensembles and SQL checks",
        "simulate": "Monte Carlo period-timing discrimination sweep",
        "report": "spectrum plus criterion in one run",
    }
    for name in ANALYSES:
        sp = sub.add_parser(name, help=descriptions[name])
        sp.add_argument("--config", required=True, help="path to the JSON run configuration")
        sp.add_argument("--out", default=None, help="output directory (overrides config and environment)")
        sp.add_argument("--seed", type=int, default=None, help="RNG seed (overrides the config)")
    return parser


def _print_error(kind: str, message: str, path: str | None = None):
    payload = {"error": {"type": kind, "message": message}}
    if path is not None:
        payload["error"]["path"] = path
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = load_config(args.config)
        cfg = validate_config(doc, args.analysis)
        seed = args.seed if args.seed is not None else (cfg["seed"] if cfg["seed"] is not None else 0)
        if not 0 <= seed < 2**64:
            raise ConfigError("seed", f"must be in [0, 2^64), got {seed}")
        outdir = Path(args.out or os.environ.get("SPECLIMIT_OUT") or cfg["output_dir"] or DEFAULT_OUT)
        outdir.mkdir(parents=True, exist_ok=True)
    except ConfigError as exc:
        _print_error("ConfigError", str(exc), exc.path)
        return 2
    try:
        started = _utcnow()
        writer = OutputWriter(outdir)
        _DISPATCH[args.analysis](cfg["model"], cfg, writer, seed)
        writer.write_record(args.analysis, doc, seed, started)
        names = ", ".join(e["name"] for e in writer.entries)
        print(f"{args.analysis}: wrote {names} and run_record.json in {outdir}")
        return 0
    except ConfigError as exc:
        _print_error("ConfigError", str(exc), exc.path)
        return 2
    except SpeclimitError as exc:
        _print_error(type(exc).__name__, str(exc))
        return 3
    except Exception as exc:  # the CLI reports rather than tracebacks
        _print_error(type(exc).__name__, str(exc))
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
