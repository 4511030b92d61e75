"""Batch command line: table1, shg-sweep, jsa, hom, validate.

Exit codes: 0 success, 1 validation or computation failure, 2 usage error.
Parameters resolve as preset < config file < explicit flags.  A config file
is flat JSON or a manifest written by an earlier run, so rerunning with a
manifest reproduces the run byte for byte.
"""

from __future__ import annotations

import argparse
import copy
import json
import sys
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .data_io import (
    RunManifest,
    canonical_json,
    curve_csv_text,
    file_sha256,
    format_float,
    write_curve_csv,
    write_manifest,
    write_matrix_csv,
    write_records_csv,
)
from .hom import (
    DelayWindowError,
    coincidence_probability,
    cramer_rao_bound,
    dip_fwhm,
    fisher_information,
    hom_curve,
    visibility,
)
from .jsa import decompose, jsi, schmidt_purity
from .scenarios import JSA_PRESETS, SWEEP_PRESETS, build_scenario_jsa
from .shg import LineshapeSpec, PerturbationSpec, asymmetry_sweep, sweep_point
from .spectral import (
    PerturbationKind,
    area_normalize,
    gaussian_profile,
    lineshape_coefficients,
    lorentzian_profile,
    make_grid,
    voigt_profile,
)

SWEEP_FIELDS = ["epsilon", "offset_b", "tvd_pump", "tvd_coherent", "tvd_incoherent"]
VOIGT_LITERATURE = (1.039, 0.711, 0.68)


class UsageError(Exception):
    pass


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- parameter resolution ------------------------------------------------------------

TABLE1_DEFAULTS = {
    "gaussian_half_span": 8.0,
    "gaussian_count": 1025,
    "lorentzian_half_span": 200.0,
    "lorentzian_count": 4097,
    "wing_exponent": 2.0,
    "voigt_sigma": 1.0,
    "voigt_gamma": 1.0,
}

VALIDATE_DEFAULTS = {
    "seed": 42,
    "realizations": 10000,
    "mc_grid_count": 1025,
    "corrupt_normalization": False,
}

DEFAULT_PRESETS = {
    "table1": "table1",
    "shg-sweep": "fig1b-tilt",
    "jsa": "fig3-narrow",
    "hom": "fig3-narrow",
    "validate": "validate",
}


def _preset_params(command: str, name: str) -> dict[str, Any]:
    if command == "table1":
        table = {"table1": TABLE1_DEFAULTS}
    elif command == "shg-sweep":
        table = SWEEP_PRESETS
    elif command in ("jsa", "hom"):
        table = JSA_PRESETS
    else:
        table = {"validate": VALIDATE_DEFAULTS}
    if name not in table:
        raise UsageError(f"unknown preset {name!r} for {command}; choose from {sorted(table)}")
    return copy.deepcopy(table[name])


def _load_config(path: str) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    if "parameters" in data and isinstance(data["parameters"], dict):
        params = dict(data["parameters"])
        params.setdefault("preset", data.get("scenario"))
        return params
    return data


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from exc


def resolve_parameters(args: argparse.Namespace) -> tuple[str, dict[str, Any]]:
    config = _load_config(args.config) if args.config else {}
    preset = args.preset or config.get("preset") or DEFAULT_PRESETS[args.command]
    params = _preset_params(args.command, preset)
    unknown = set(config) - set(params) - {"preset"}
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    params.update({k: v for k, v in config.items() if k != "preset"})
    for key, value in vars(args).items():
        if key in ("command", "config", "preset", "out", "func") or value is None:
            continue
        if key not in params:
            raise UsageError(f"--{key.replace('_', '-')} does not apply to {args.command}")
        params[key] = value
    params["preset"] = preset
    _validate(args.command, params)
    return preset, params


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise UsageError(msg)


def _validate(command: str, p: dict[str, Any]) -> None:
    def odd_count(key):
        v = p[key]
        _require(isinstance(v, int) and v >= 3 and v % 2 == 1, f"{key} must be an odd integer >= 3")

    if command == "table1":
        for key in ("gaussian_count", "lorentzian_count"):
            odd_count(key)
        for key in ("gaussian_half_span", "lorentzian_half_span", "voigt_sigma", "voigt_gamma"):
            _require(p[key] > 0, f"{key} must be positive")
    elif command == "shg-sweep":
        odd_count("grid_count")
        _require(p["lineshape"] in ("gaussian", "lorentzian", "voigt"), "unknown lineshape")
        _require(p["perturbation"] in [k.value for k in PerturbationKind], "unknown perturbation")
        _require(len(p["epsilons"]) > 0, "epsilon schedule is empty")
        _require(all(e >= 0 for e in p["epsilons"]), "epsilons must be >= 0")
        _require(p["width"] > 0 and p["gamma"] > 0 and p["half_span"] > 0, "widths must be positive")
        _require(p["pm_bandwidth"] is None or p["pm_bandwidth"] > 0, "pm_bandwidth must be positive")
    elif command in ("jsa", "hom"):
        odd_count("grid_count")
        _require(p["construction"] in ("pump", "gamma-mix"), "unknown construction")
        _require(p["pump_ghz"] > 0 and p["length"] > 0 and p["grid_half_span"] > 0,
                 "pump_ghz, length and grid_half_span must be positive")
        _require(0 <= p["gamma"] <= 1, "gamma must lie in [0, 1]")
        _require(p["n_delays"] >= 3 and p["tau_max"] > p["tau_min"], "bad delay window")
        _require(p["n_events"] >= 1, "n_events must be >= 1")
    elif command == "validate":
        _require(p["realizations"] >= 100, "validate needs realizations >= 100")
        odd_count("mc_grid_count")


# -- output handling ---------------------------------------------------------------

class Output:
    """Collects emitted files; writes the manifest first and finalises it last."""

    def __init__(self, out: str | None, command: str, scenario: str, params: dict[str, Any]):
        self.dir = Path(out) if out else None
        self.manifest = RunManifest(scenario=scenario, command=command, parameters=params,
                                    tool_version=__version__)
        if self.dir is not None:
            if not self.dir.is_dir():
                raise UsageError(f"output directory {self.dir} does not exist")
            write_manifest(self.dir / "manifest.json", self.manifest)

    def emit(self, name: str, writer: Callable[[Path], None], stdout_text: Callable[[], str] | None = None):
        if self.dir is None:
            if stdout_text is not None:
                sys.stdout.write(stdout_text())
            return
        path = self.dir / name
        writer(path)
        self.manifest.files[name] = file_sha256(path)

    def finish(self) -> None:
        if self.dir is not None:
            self.manifest.complete = True
            write_manifest(self.dir / "manifest.json", self.manifest)


def _table_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def _write_text(text: str) -> Callable[[Path], None]:
    def writer(path: Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return writer


# -- commands ----------------------------------------------------------------------

def table1_rows(p: dict[str, Any]) -> list[list[Any]]:
    gauss_grid = make_grid(0.0, 2 * p["gaussian_half_span"], p["gaussian_count"])
    wide = make_grid(0.0, 2 * p["lorentzian_half_span"], p["lorentzian_count"])
    wing = p["wing_exponent"]
    rows = []
    c1, c2 = lineshape_coefficients(gaussian_profile(gauss_grid, 0.0, 1.0))
    rows.append(["gaussian", c1, c2, c2 / c1, p["gaussian_half_span"], p["gaussian_count"], 0.0, ""])
    c1, c2 = lineshape_coefficients(lorentzian_profile(wide, 0.0, 1.0), wing_exponent=wing)
    rows.append(["lorentzian", c1, c2, c2 / c1, p["lorentzian_half_span"], p["lorentzian_count"],
                 wing, ""])
    c1, c2 = lineshape_coefficients(voigt_profile(wide, 0.0, p["voigt_sigma"], p["voigt_gamma"]),
                                    wing_exponent=wing)
    lit = VOIGT_LITERATURE
    note = (f"sigma_g={p['voigt_sigma']:g} gamma_l={p['voigt_gamma']:g}; literature values "
            f"C1={lit[0]} C2={lit[1]} ratio={lit[2]} rest on an unstated normalisation")
    rows.append(["voigt", c1, c2, c2 / c1, p["lorentzian_half_span"], p["lorentzian_count"], wing, note])
    return rows


TABLE1_HEADER = ["lineshape", "C1", "C2", "C2_over_C1", "half_span", "count", "wing_exponent", "note"]


def cmd_table1(args, preset, p) -> int:
    out = Output(args.out, "table1", preset, p)
    text = _table_text(TABLE1_HEADER, table1_rows(p))
    out.emit("table1.csv", _write_text(text), lambda: text)
    out.finish()
    return 0


def _sweep_base(p) -> LineshapeSpec:
    return LineshapeSpec(kind=p["lineshape"], omega0=0.0, width=float(p["width"]),
                         gamma=float(p["gamma"]), half_span=float(p["half_span"]),
                         count=int(p["grid_count"]))


def cmd_shg_sweep(args, preset, p) -> int:
    out = Output(args.out, "shg-sweep", preset, p)
    base = _sweep_base(p)
    _log(f"shg-sweep: {len(p['epsilons'])} strengths x {len(p['offsets'])} offsets")
    records = asymmetry_sweep(base, p["perturbation"], p["epsilons"], p["offsets"],
                              pm_bandwidth=p["pm_bandwidth"])
    cols = [[getattr(r, n) for r in records] for n in SWEEP_FIELDS]
    out.emit("sweep.csv", lambda path: write_records_csv(path, records, SWEEP_FIELDS),
             lambda: curve_csv_text(cols, SWEEP_FIELDS))
    for eps, b in p["spectra"]:
        pt = sweep_point(base, PerturbationSpec(p["perturbation"], float(eps), float(b)),
                         p["pm_bandwidth"])
        tag = f"eps{float(eps):g}_b{float(b):g}"
        pump = pt.pump
        pump_cols = [pump.omega, pump.values.real, area_normalize(pump.intensity()).values]
        shg_cols = [pt.coherent.grid.samples, area_normalize(pt.coherent.intensity).values,
                    area_normalize(pt.incoherent.intensity).values]
        out.emit(f"pump_{tag}.csv",
                 lambda path, c=pump_cols: write_curve_csv(path, c, ["frequency", "amplitude", "intensity"]))
        out.emit(f"shg_{tag}.csv",
                 lambda path, c=shg_cols: write_curve_csv(path, c, ["frequency", "coherent", "incoherent"]))
    out.finish()
    return 0


def _jsa_summary(jsa) -> list[list[Any]]:
    dec = decompose(jsa)
    return [["norm", jsa.norm], ["gamma", dec.gamma], ["symmetric_weight", dec.symmetric_weight],
            ["purity", schmidt_purity(jsa)]]


def cmd_jsa(args, preset, p) -> int:
    out = Output(args.out, "jsa", preset, p)
    jsa = build_scenario_jsa(p)
    summary = _jsa_summary(jsa)
    for name, value in summary:
        _log(f"{name}: {format_float(value)}")
    text = _table_text(["quantity", "value"], summary)
    out.emit("jsa_summary.csv", _write_text(text), lambda: text)
    out.emit("jsi.csv", lambda path: write_matrix_csv(path, jsi(jsa)))
    out.finish()
    return 0


def cmd_hom(args, preset, p) -> int:
    out = Output(args.out, "hom", preset, p)
    jsa = build_scenario_jsa(p)
    curve = hom_curve(jsa, p["tau_min"], p["tau_max"], p["n_delays"])
    try:
        vis = visibility(curve)
        width = dip_fwhm(curve)
    except DelayWindowError as exc:
        _log(f"error: {exc}; widen tau_min/tau_max")
        return 1
    fisher = fisher_information(curve)
    crb = cramer_rao_bound(fisher, p["n_events"])
    cols = [curve.delays, curve.probabilities, fisher.information, crb]
    names = ["tau", "P", "I", "crb"]
    out.emit("hom.csv", lambda path: write_curve_csv(path, cols, names),
             lambda: curve_csv_text(cols, names))
    summary = _jsa_summary(jsa) + [["visibility", vis], ["dip_fwhm", width],
                                   ["fisher_max", float(np.max(fisher.information))]]
    out.emit("hom_summary.csv", _write_text(_table_text(["quantity", "value"], summary)))
    _log(f"visibility: {vis:.6f}  dip FWHM: {width:.6g}")
    out.finish()
    return 0


def cmd_validate(args, preset, p) -> int:
    from .validation import run_validation

    out = Output(args.out, "validate", preset, p)
    report = run_validation(seed=int(p["seed"]), realizations=int(p["realizations"]),
                            mc_grid_count=int(p["mc_grid_count"]),
                            corrupt_normalization=bool(p["corrupt_normalization"]))
    text = canonical_json(report) + "\n"
    out.emit("validate.json", _write_text(text), lambda: text)
    out.finish()
    failed = [name for name, r in report["checks"].items() if not r["passed"]]
    for name, r in report["checks"].items():
        _log(f"{'PASS' if r['passed'] else 'FAIL'} {name}")
    if failed:
        _log(f"failed checks: {', '.join(failed)}")
        return 1
    return 0


# -- argument parsing --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="incoherent-pairs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="output directory (must exist); stdout when omitted")
        sp.add_argument("--config", help="JSON config or manifest from an earlier run")
        sp.add_argument("--preset", help="named parameter set")
        return sp

    sp = common(sub.add_parser("table1", help="lineshape sensitivity coefficients"))
    sp.add_argument("--grid-count", dest="gaussian_count", type=int,
                    help="samples on the Gaussian grid")
    sp.set_defaults(func=cmd_table1)

    sp = common(sub.add_parser("shg-sweep", help="pump and SHG asymmetry sweep"))
    sp.add_argument("--grid-count", type=int)
    sp.add_argument("--lineshape", choices=["gaussian", "lorentzian", "voigt"])
    sp.add_argument("--perturbation", choices=[k.value for k in PerturbationKind])
    sp.add_argument("--epsilons", type=_float_list)
    sp.add_argument("--offsets", type=_float_list)
    sp.add_argument("--pm-bandwidth", type=float)
    sp.set_defaults(func=cmd_shg_sweep)

    for name, func, text in (("jsa", cmd_jsa, "joint spectrum, purity and gamma"),
                             ("hom", cmd_hom, "HOM curve with Fisher information")):
        sp = common(sub.add_parser(name, help=text))
        sp.add_argument("--grid-count", type=int)
        sp.add_argument("--seed", dest="phase_seed", type=int,
                        help="randomise the pump phase with this seed")
        sp.add_argument("--pump-ghz", type=float)
        if name == "hom":
            sp.add_argument("--tau-min", type=float)
            sp.add_argument("--tau-max", type=float)
            sp.add_argument("--n-delays", type=int)
            sp.add_argument("--n-events", type=int)
        sp.set_defaults(func=func)

    sp = common(sub.add_parser("validate", help="run the invariant and Monte-Carlo checks"))
    sp.add_argument("--seed", type=int)
    sp.add_argument("--realizations", type=int)
    sp.add_argument("--grid-count", dest="mc_grid_count", type=int)
    sp.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        preset, params = resolve_parameters(args)
        return args.func(args, preset, params)
    except UsageError as exc:
        _log(f"usage error: {exc}")
        return 2
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        _log(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
