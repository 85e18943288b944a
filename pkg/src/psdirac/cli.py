"""Command line front end.

Subcommands emit spectrum tables, radial wavefunction samples,
finite-difference eigenvalue reports, verification reports, and field
maps as CSV or JSON.  Output is deterministic: floats are printed with
17 significant digits, row order is fixed, and randomized checks run
from an explicit seed, so identical configurations produce byte-identical
files.

Exit codes: 0 success, 1 verification failure, 2 bad configuration or
parameters, 3 numerical-solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys

from . import __version__
from . import fields_solution as fs
from . import oracle, spectra, verify
from .errors import InputError, NumericalError, ParameterError

_COMMON_DEFAULTS = {
    "mass": 1.0,
    "g_factor": 2.0,
    "magneton": 1.0,
    "omega": None,
    "current": None,
    "box_length": 2.0 * math.pi,
    "format": "csv",
    "out": None,
    "config": None,
}

_COMMAND_DEFAULTS = {
    "spectrum": {"n_max": 2, "k_max": 2, "ntilde": "0"},
    "wavefunction": {"n": 0, "k": 0, "ntilde": "0", "samples": 200, "grid_rmax": 40.0},
    "oracle": {
        "n_max": 2,
        "k_max": 2,
        "potential": "ps-log",
        "charge": 0.0,
        "grid_h": 0.02,
        "grid_rmax": 40.0,
    },
    "verify": {"tol": [], "seed": verify.DEFAULT_SEED},
    "fields": {"samples": 5, "grid_rmax": 8.0},
}

_CONVERTERS = {
    "mass": float,
    "g_factor": float,
    "magneton": float,
    "omega": float,
    "current": float,
    "box_length": float,
    "n_max": int,
    "k_max": int,
    "n": int,
    "k": int,
    "ntilde": str,
    "samples": int,
    "grid_h": float,
    "grid_rmax": float,
    "potential": str,
    "charge": float,
    "format": str,
    "out": str,
    "seed": int,
    "config": str,
}

_FIELD_ORDER = {
    "spectrum": (
        "n",
        "k",
        "N",
        "Ntilde",
        "kappa",
        "E_relativistic",
        "E_quasirel",
        "E_nonrel_shifted",
    ),
    "wavefunction": (
        "n",
        "k",
        "N",
        "Ntilde",
        "kappa",
        "E",
        "r",
        "phi1",
        "phi2",
        "eta1",
        "eta2",
        "radial_density",
    ),
    "oracle": ("k", "n", "eigenvalue", "target", "deviation", "note"),
    "verify": ("name", "passed", "measured", "threshold", "comparison", "detail"),
    "fields": (
        "x1",
        "x2",
        "E1",
        "E2",
        "E3",
        "B1",
        "B2",
        "B3",
        "invariant_difference",
        "invariant_dot",
    ),
}

_ARRAY_KEY = {"verify": "checks"}


# ------------------------------------------------------------- parsing


def _add_flags(parser: argparse.ArgumentParser, names) -> None:
    for name in names:
        flag = "--" + name.replace("_", "-")
        if name == "tol":
            parser.add_argument(
                flag,
                action="append",
                default=argparse.SUPPRESS,
                metavar="NAME=VALUE",
                help="override one check threshold (repeatable)",
            )
        elif name == "format":
            parser.add_argument(
                flag, choices=("csv", "json"), default=argparse.SUPPRESS
            )
        else:
            parser.add_argument(flag, default=argparse.SUPPRESS)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psdirac",
        description="bound states of a neutral fermion around a charged filament",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command, extra in _COMMAND_DEFAULTS.items():
        p = sub.add_parser(command)
        _add_flags(p, _COMMON_DEFAULTS)
        _add_flags(p, extra)
    return parser


def _convert(key: str, raw):
    if key == "tol":
        return raw if isinstance(raw, list) else [raw]
    conv = _CONVERTERS[key]
    if not isinstance(raw, str):
        return raw
    try:
        return conv(raw)
    except ValueError as exc:
        raise ParameterError(f"bad value for {key!r}: {raw!r}") from exc


def _load_config_file(path: str) -> dict:
    values: dict = {}
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise ParameterError(f"cannot read config file {path!r}: {exc}") from exc
    known = set(_CONVERTERS) | {"tol"}
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ParameterError(f"{path}:{lineno}: expected key = value")
        key, _, raw = text.partition("=")
        key = key.strip().replace("-", "_")
        raw = raw.strip()
        if key not in known:
            raise ParameterError(f"{path}:{lineno}: unknown key {key!r}")
        if key == "tol":
            values.setdefault("tol", []).extend(
                piece.strip() for piece in raw.split(",") if piece.strip()
            )
        else:
            values[key] = raw
    return values


def _merge_settings(namespace: argparse.Namespace) -> dict:
    command = namespace.command
    cli_values = {k: v for k, v in vars(namespace).items() if k != "command"}
    settings = dict(_COMMON_DEFAULTS)
    settings.update(_COMMAND_DEFAULTS[command])
    config_path = cli_values.get("config")
    if config_path is not None:
        for key, raw in _load_config_file(config_path).items():
            if key in settings:
                settings[key] = _convert(key, raw)
    for key, raw in cli_values.items():
        settings[key] = _convert(key, raw)
    settings["command"] = command
    return settings


def _parse_tolerances(entries) -> dict:
    overrides = {}
    for entry in entries:
        name, sep, value = entry.partition("=")
        if not sep:
            raise ParameterError(f"--tol expects NAME=VALUE, got {entry!r}")
        try:
            overrides[name.strip()] = float(value)
        except ValueError as exc:
            raise ParameterError(f"bad tolerance value in {entry!r}") from exc
    return overrides


def _parse_ntilde(text: str) -> list[int]:
    try:
        if ":" in text:
            lo_text, hi_text = text.split(":", 1)
            lo, hi = int(lo_text), int(hi_text)
            if lo > hi:
                raise ParameterError(f"empty ntilde range {text!r}")
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError as exc:
        raise ParameterError(f"bad ntilde value {text!r}") from exc


def _parse_potential(text: str, charge: float) -> oracle.ReducedPotential:
    if text == "ps-log":
        return oracle.ReducedPotential.ps_log(charge=charge)
    if text == "zero":
        return oracle.ReducedPotential.zero()
    if text.startswith("inverse-radius:"):
        try:
            alpha = float(text.partition(":")[2])
        except ValueError as exc:
            raise ParameterError(f"bad potential {text!r}") from exc
        return oracle.ReducedPotential.inverse_radius(alpha, charge=charge)
    raise ParameterError(
        f"unknown potential {text!r} (expected ps-log, zero, or inverse-radius:<alpha>)"
    )


def _build_params(settings: dict) -> spectra.SpectrumParams:
    omega, current = settings["omega"], settings["current"]
    if omega is not None and current is not None:
        raise ParameterError("give either --omega or --current, not both")
    if omega is None:
        omega = 1.0 if current is None else 2.0 * current
    return spectra.SpectrumParams(
        m=settings["mass"],
        g=settings["g_factor"],
        mu0=settings["magneton"],
        omega=omega,
        L=settings["box_length"],
    )


# ------------------------------------------------------------ rendering


def _format_float(value: float) -> str:
    if not math.isfinite(value):
        raise NumericalError(f"non-finite value in output: {value!r}")
    return format(value, ".17g")


def _json_fragment(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _format_float(value)
    if isinstance(value, str):
        # minimal escaping, enough for the strings this tool emits
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json_fragment(v) for v in value) + "]"
    if isinstance(value, dict):
        inner = ", ".join(f'{_json_fragment(str(k))}: {_json_fragment(v)}' for k, v in value.items())
        return "{" + inner + "}"
    raise ParameterError(f"cannot serialize {type(value).__name__}")


def _render_json(meta: dict, rows: list, array_key: str) -> str:
    return _json_fragment({"meta": meta, array_key: rows}) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _format_float(value)
    return str(value)


def _render_csv(rows: list, fields) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_csv_cell(row[name]) for name in fields])
    return buffer.getvalue()


def _write_output(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _params_meta(params: spectra.SpectrumParams) -> dict:
    return {
        "mass": params.m,
        "g_factor": params.g,
        "magneton": params.mu0,
        "omega": params.omega,
        "box_length": params.L,
        "lambda_tilde": spectra.coupling_lambda_tilde(params),
    }


# ------------------------------------------------------------- commands


def _run_spectrum(settings: dict):
    params = _build_params(settings)
    lam_t = spectra.coupling_lambda_tilde(params)
    ntilde_values = _parse_ntilde(settings["ntilde"])
    n_max, k_max = settings["n_max"], settings["k_max"]
    if n_max < 0 or k_max < 0:
        raise ParameterError("n-max and k-max must be non-negative")
    rows = []
    for n in range(n_max + 1):
        for k in range(k_max + 1):
            big_n = 2 * (n + k) + 1
            for ntilde in ntilde_values:
                kappa = spectra.quantized_kappa(params.L, ntilde)
                rows.append(
                    {
                        "n": n,
                        "k": k,
                        "N": big_n,
                        "Ntilde": ntilde,
                        "kappa": kappa,
                        "E_relativistic": spectra.relativistic_energy(
                            params.m, lam_t, kappa, big_n
                        ),
                        "E_quasirel": spectra.quasirel_energy(params.m, lam_t, kappa, big_n),
                        "E_nonrel_shifted": spectra.nonrel_lab_energy(
                            params.m, lam_t, kappa, big_n
                        ),
                    }
                )
    rows.sort(key=lambda row: (row["N"], row["k"], row["Ntilde"]))
    meta = {
        "command": "spectrum",
        "version": __version__,
        "params": _params_meta(params),
        "n_max": n_max,
        "k_max": k_max,
        "ntilde": settings["ntilde"],
    }
    return meta, rows, True


def _run_wavefunction(settings: dict):
    params = _build_params(settings)
    n, k = settings["n"], settings["k"]
    samples, r_max = settings["samples"], settings["grid_rmax"]
    if samples < 2:
        raise ParameterError("samples must be at least 2")
    if not r_max > 0.0:
        raise ParameterError("grid-rmax must be positive")
    rows = []
    for ntilde in _parse_ntilde(settings["ntilde"]):
        sol = fs.assemble_bispinor(params, n, k, ntilde)
        weight = 2.0 * math.pi * params.L * sol.prefactor**2 / sol.scale_factor**2
        for i in range(1, samples + 1):
            r = r_max * i / samples
            eta1, eta2, phi1, phi2 = sol.radial_values(r)
            rows.append(
                {
                    "n": n,
                    "k": k,
                    "N": sol.N,
                    "Ntilde": ntilde,
                    "kappa": sol.kappa,
                    "E": sol.E,
                    "r": r,
                    "phi1": phi1,
                    "phi2": phi2,
                    "eta1": eta1,
                    "eta2": eta2,
                    "radial_density": weight
                    * (eta1 * eta1 + eta2 * eta2 + phi1 * phi1 + phi2 * phi2),
                }
            )
    meta = {
        "command": "wavefunction",
        "version": __version__,
        "params": _params_meta(params),
        "n": n,
        "k": k,
        "ntilde": settings["ntilde"],
        "samples": samples,
        "grid_rmax": settings["grid_rmax"],
    }
    return meta, rows, True


def _run_oracle(settings: dict):
    potential = _parse_potential(settings["potential"], settings["charge"])
    grid = oracle.RadialGrid.for_r_max(settings["grid_h"], settings["grid_rmax"])
    n_max, k_max = settings["n_max"], settings["k_max"]
    if n_max < 0 or k_max < 0:
        raise ParameterError("n-max and k-max must be non-negative")
    analytic = settings["potential"] == "ps-log" and settings["charge"] == 0.0
    rows = []
    for k in range(k_max + 1):
        ham = oracle.discretize(k, potential, grid)
        values = oracle.lowest_eigenvalues(ham, n_max + 1)
        for n, value in enumerate(values):
            value = float(value)
            target = spectra.reduced_eigenvalue(n, k) if analytic else None
            rows.append(
                {
                    "k": k,
                    "n": n,
                    "eigenvalue": value,
                    "target": target,
                    "deviation": value - target if target is not None else None,
                    "note": "" if value < -1e-8 else "no bound states at this level",
                }
            )
    meta = {
        "command": "oracle",
        "version": __version__,
        "potential": settings["potential"],
        "charge": settings["charge"],
        "grid_h": settings["grid_h"],
        "grid_rmax": settings["grid_rmax"],
        "n_max": n_max,
        "k_max": k_max,
    }
    return meta, rows, True


def _run_verify(settings: dict):
    overrides = _parse_tolerances(settings["tol"])
    results = verify.run_all_checks(tolerances=overrides, seed=settings["seed"])
    rows = [
        {
            "name": r.name,
            "passed": r.passed,
            "measured": r.measured,
            "threshold": r.threshold,
            "comparison": r.comparison,
            "detail": r.detail,
        }
        for r in results
    ]
    meta = {
        "command": "verify",
        "version": __version__,
        "seed": settings["seed"],
        "overrides": {name: overrides[name] for name in sorted(overrides)},
        "checks_passed": sum(r.passed for r in results),
        "checks_total": len(results),
    }
    return meta, rows, all(r.passed for r in results)


def _run_fields(settings: dict):
    params = _build_params(settings)
    samples, r_max = settings["samples"], settings["grid_rmax"]
    if samples < 1:
        raise ParameterError("samples must be at least 1")
    if not r_max > 0.0:
        raise ParameterError("grid-rmax must be positive")
    rows = []
    for i in range(1, samples + 1):
        radius = r_max * i / samples
        for j in range(8):
            angle = math.pi * j / 4.0
            x1, x2 = radius * math.cos(angle), radius * math.sin(angle)
            point = fs.field_strengths(params.omega, x1, x2)
            rows.append(
                {
                    "x1": x1,
                    "x2": x2,
                    "E1": point.E_vec[0],
                    "E2": point.E_vec[1],
                    "E3": point.E_vec[2],
                    "B1": point.B_vec[0],
                    "B2": point.B_vec[1],
                    "B3": point.B_vec[2],
                    "invariant_difference": point.invariant_difference(),
                    "invariant_dot": point.invariant_dot(),
                }
            )
    meta = {
        "command": "fields",
        "version": __version__,
        "params": _params_meta(params),
        "samples": samples,
        "grid_rmax": settings["grid_rmax"],
    }
    return meta, rows, True


_RUNNERS = {
    "spectrum": _run_spectrum,
    "wavefunction": _run_wavefunction,
    "oracle": _run_oracle,
    "verify": _run_verify,
    "fields": _run_fields,
}


def main(argv=None) -> int:
    try:
        namespace = _build_parser().parse_args(argv)
        settings = _merge_settings(namespace)
        command = settings["command"]
        meta, rows, all_ok = _RUNNERS[command](settings)
        if settings["format"] == "json":
            text = _render_json(meta, rows, _ARRAY_KEY.get(command, "rows"))
        else:
            text = _render_csv(rows, _FIELD_ORDER[command])
        _write_output(text, settings["out"])
        return 0 if all_ok else 1
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
