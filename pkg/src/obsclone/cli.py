"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage/domain error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys

import numpy as np

from . import _serial, jointmeas, machines, qcore, verify
from .qcore import DomainError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

DEFAULTS = {
    "machine": "nc",
    "theta": "pi/4",
    "theta_min": "pi/200",
    "theta_max": "99*pi/200",
    "steps": 99,
    "bloch": "0,0,1",
    "samples": 50,
    "seed": 0,
    "tol": 1e-9,
    "matrix_tol": 1e-10,
    "restarts": 200,
    "floor": 0.05,
    "commuting_tol": 1e-8,
    "workers": 1,
    "maxiter": 2000,
    "step": 0.5,
    "out": None,
    "format": None,
    "v_seed": None,
    "commuting": False,
}

FORMATS = {
    "list": ("table", "json"),
    "verify": ("json", "table"),
    "sweep": ("csv", "json"),
    "nogo": ("json",),
    "compare": ("table", "json"),
}

_PI_RE = re.compile(
    r"^\s*(?P<sign>[-+]?)\s*(?:(?P<coef>\d+(?:\.\d*)?(?:[eE][-+]?\d+)?)\s*\*\s*)?pi"
    r"\s*(?:/\s*(?P<den>\d+(?:\.\d*)?(?:[eE][-+]?\d+)?))?\s*$"
)


class UsageError(Exception):
    pass


def parse_angle(text) -> float:
    """Radians: a float or a pi expression such as 'pi/4', '3*pi/8', '-pi'."""
    if isinstance(text, (int, float)):
        return float(text)
    m = _PI_RE.match(str(text))
    if m:
        val = math.pi * float(m["coef"] or 1.0) / float(m["den"] or 1.0)
        return -val if m["sign"] == "-" else val
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"cannot parse angle {text!r} (radians, or e.g. pi/4)") from None


def parse_bloch(text) -> np.ndarray:
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(",")
    try:
        s = np.array([float(p) for p in parts])
    except ValueError:
        raise UsageError(f"cannot parse Bloch vector {text!r}; expected x,y,z") from None
    if s.shape != (3,):
        raise UsageError(f"Bloch vector needs three components, got {text!r}")
    return s


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="obsclone",
        description="Cloning machines for qubit observables: simulate, verify, sweep, search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *names):
        p.add_argument("--config", help="JSON file of defaults; explicit flags win")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=FORMATS[p.prog.split()[-1]])
        for n in names:
            flag = "--" + n.replace("_", "-")
            if n in ("samples", "seed", "steps", "restarts", "workers", "maxiter", "v_seed"):
                p.add_argument(flag, type=int)
            elif n in ("tol", "matrix_tol", "floor", "commuting_tol", "step"):
                p.add_argument(flag, type=float)
            elif n == "machine":
                p.add_argument(flag, choices=list(machines.CATALOG))
            elif n == "commuting":
                p.add_argument(flag, action="store_true", default=None,
                               help="diagnostic: commuting generators s3, s3; success means residual <= --commuting-tol")
            else:
                p.add_argument(flag)

    common(sub.add_parser("list", help="list the machine catalog"))
    common(sub.add_parser("verify", help="fit added noises and check covariance"),
           "machine", "theta", "samples", "seed", "tol", "matrix_tol", "v_seed")
    common(sub.add_parser("sweep", help="uncertainty products over a theta grid"),
           "machine", "theta_min", "theta_max", "steps", "bloch", "samples", "seed", "v_seed")
    common(sub.add_parser("nogo", help="numerical search for a perfect noncommuting cloner"),
           "restarts", "seed", "floor", "commuting", "commuting_tol", "workers", "maxiter", "step")
    common(sub.add_parser("compare", help="observable cloner vs universal state cloner"),
           "bloch", "samples", "seed")
    return parser


def _resolve(args) -> dict:
    cfg = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise OSError(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {args.config} is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise UsageError("config file must hold a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in raw.items()}
    out = {}
    for key, default in DEFAULTS.items():
        val = getattr(args, key, None)
        if val is None:
            val = cfg.get(key, default)
        out[key] = val
    if out["format"] is None:
        out["format"] = FORMATS[args.command][0]
    if out["format"] not in FORMATS[args.command]:
        raise UsageError(f"format {out['format']!r} not available for {args.command}")
    if out["machine"] not in machines.CATALOG:
        raise UsageError(f"unknown machine {out['machine']!r}")
    return out


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _machine_builder(cfg):
    name = cfg["machine"]
    V = None
    if name == "conjugated" and cfg["v_seed"] is not None:
        V = qcore.random_unitary2(np.random.default_rng(cfg["v_seed"]))
    return lambda theta: machines.build(name, theta, V)


def cmd_list(cfg) -> int:
    if cfg["format"] == "json":
        _emit(_serial.dumps(machines.CATALOG), cfg["out"])
        return EXIT_OK
    width = max(len(n) for n in machines.CATALOG)
    lines = [f"{n.ljust(width)}  class: {e['class']}\n{' ' * width}  noise: {e['noise']}\n"
             for n, e in machines.CATALOG.items()]
    _emit("".join(lines), cfg["out"])
    return EXIT_OK


def cmd_verify(cfg) -> int:
    name = cfg["machine"]
    tol = float(cfg["tol"])
    if name == "universal-marginal":
        report = verify.estimate_marginal_noises(machines.UNIVERSAL_CLONER, cfg["samples"], cfg["seed"], tol)
        predicted = (1.5, 1.5)
        theta, cov_ok = None, None
    else:
        theta = parse_angle(cfg["theta"]) if machines.CATALOG[name]["needs_theta"] else None
        spec = _machine_builder(cfg)(theta)
        report = verify.estimate_noises(spec, cfg["samples"], cfg["seed"], tol)
        predicted = (spec.predicted_g1, spec.predicted_g2)
        rng = np.random.default_rng(cfg["seed"])
        cov_ok = all(
            verify.check_covariance(spec, qcore.random_unitary2(rng), cfg["samples"], cfg["seed"], tol)
            for _ in range(3)
        )
    noise_ok = all(abs(f - p) <= tol for f, p in zip((report.g1_fit, report.g2_fit), predicted))
    ok = report.state_independent and noise_ok and cov_ok is not False
    doc = {
        "machine": name,
        "theta": theta,
        "noise_report": report.to_dict(),
        "predicted_g1": predicted[0],
        "predicted_g2": predicted[1],
        "covariance_ok": cov_ok,
        "passed": ok,
    }
    if cfg["format"] == "json":
        text = _serial.dumps(doc)
    else:
        f = _serial.fmt_float
        text = (
            f"machine    {name}\n"
            f"theta      {'-' if theta is None else f(theta)}\n"
            f"g1 fit     {f(report.g1_fit)}  (predicted {f(predicted[0])})\n"
            f"g2 fit     {f(report.g2_fit)}  (predicted {f(predicted[1])})\n"
            f"residual   {f(report.residual_max)}  over {report.samples_used} states\n"
            f"covariance {'-' if cov_ok is None else ('ok' if cov_ok else 'FAILED')}\n"
            f"verdict    {'PASS' if ok else 'FAIL'}\n"
        )
    _emit(text, cfg["out"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sweep(cfg) -> int:
    name = cfg["machine"]
    if not machines.CATALOG[name]["needs_theta"]:
        raise UsageError(f"machine {name!r} has no theta to sweep")
    grid = jointmeas.theta_grid(parse_angle(cfg["theta_min"]), parse_angle(cfg["theta_max"]), int(cfg["steps"]))
    s = parse_bloch(cfg["bloch"])
    rho = qcore.bloch_to_state(s)
    reports = jointmeas.sweep(_machine_builder(cfg), grid, rho, cfg["samples"], cfg["seed"])
    if cfg["format"] == "csv":
        text = jointmeas.csv_text(reports)
    else:
        text = _serial.dumps([r.to_dict() for r in reports])
    _emit(text, cfg["out"])
    return EXIT_OK


def cmd_nogo(cfg) -> int:
    gens = [qcore.pauli(3), qcore.pauli(3)] if cfg["commuting"] else None
    res = verify.nogo_search(
        restarts=int(cfg["restarts"]),
        seed=int(cfg["seed"]),
        step=float(cfg["step"]),
        maxiter=int(cfg["maxiter"]),
        generators=gens,
        workers=int(cfg["workers"]),
    )
    if cfg["commuting"]:
        ok = res.best_residual <= float(cfg["commuting_tol"])
        criterion = f"best_residual <= {cfg['commuting_tol']} (commuting diagnostic)"
    else:
        ok = res.best_residual > float(cfg["floor"])
        criterion = f"best_residual > {cfg['floor']}"
    doc = res.to_dict()
    doc["criterion"] = criterion
    doc["passed"] = ok
    _emit(_serial.dumps(doc), cfg["out"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_compare(cfg) -> int:
    s = parse_bloch(cfg["bloch"])
    cmp = jointmeas.compare_with_universal(s, cfg["samples"], cfg["seed"])
    _emit(cmp.table() if cfg["format"] == "table" else cmp.to_json(), cfg["out"])
    return EXIT_OK


COMMANDS = {
    "list": cmd_list,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "nogo": cmd_nogo,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _resolve(args)
        return COMMANDS[args.command](cfg)
    except (UsageError, DomainError) as exc:
        print(f"obsclone {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"obsclone {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
