"""Command-line front end.

Subcommands
-----------
zeros   build or validate the Bessel-zero cache
table   dimensionless force sums (k, I_a, I_b) at cube checkpoints
force   forces in newtons at truncation k, with the ratio against k - 1
asym    long-cylinder scan or parallel-plate cutoff table
vacuum  uncertainty-cutoff results: alpha-solve, free-energy, plate-energy

Every option can also come from a flat ``key = value`` file given with
``--config``. Flags override the file and the file overrides built-in
defaults. Exit status: 0 on success, 1 on usage errors, 2 on numerical or
I/O failures.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
import warnings
from pathlib import Path

from cylcasimir import __version__
from cylcasimir import asymptotics as asym
from cylcasimir import vacuum_reg as vac
from cylcasimir.cavity_model import PhysicalForceTerm, CavityGeometry, PlasmaCutoff, force_sum_convergence
from cylcasimir.constants import HBAR, HBAR_C, SPEED_OF_LIGHT
from cylcasimir.specfun.quadrature import QuadratureError
from cylcasimir.specfun.zeros import default_cache_dir, load_or_build_zero_table
from cylcasimir.sum_engine import DEFAULT_CHECKPOINTS, shell_sum

log = logging.getLogger("cylcasimir")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2

CACHE_FILE = "bessel_zeros.bin"


class UsageError(Exception):
    pass


class NumericalError(Exception):
    pass


# ---------------------------------------------------------------------------
# option parsing helpers


def _positive_float(text):
    val = float(text)
    if not (val > 0 and math.isfinite(val)):
        raise ValueError(f"expected a positive number, got {text!r}")
    return val


def _nonneg_float(text):
    val = float(text)
    if not (val >= 0 and math.isfinite(val)):
        raise ValueError(f"expected a non-negative number, got {text!r}")
    return val


def _extent(text):
    val = float(text)
    if not val > 0:
        raise ValueError(f"expected a positive extent, got {text!r}")
    return val


def _positive_int(text):
    val = int(text)
    if val < 1:
        raise ValueError(f"expected a positive integer, got {text!r}")
    return val


def _nonneg_int(text):
    val = int(text)
    if val < 0:
        raise ValueError(f"expected a non-negative integer, got {text!r}")
    return val


def _int_list(text):
    vals = tuple(int(t) for t in str(text).replace(" ", "").split(",") if t)
    if not vals:
        raise ValueError("empty list")
    if any(v < 1 for v in vals) or any(b <= a for a, b in zip(vals, vals[1:])):
        raise ValueError(f"checkpoints must be positive and strictly ascending: {text!r}")
    return vals


def _float_list(text):
    vals = tuple(_positive_float(t) for t in str(text).replace(" ", "").split(",") if t)
    if not vals:
        raise ValueError("empty list")
    return vals


def _threads(text):
    if str(text).lower() == "auto":
        return "auto"
    return _positive_int(text)


def _fmt(text):
    if text not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {text!r}")
    return text


# key -> (converter, built-in default). Shared by flags and the config file.
OPTIONS = {
    "format": (_fmt, "csv"),
    "out": (str, None),
    "cache": (str, None),
    "threads": (_threads, "auto"),
    "alpha": (_positive_float, 1.0),
    "y_p": (_positive_float, None),
    "a": (_positive_float, 1e-7),
    "b": (_positive_float, 1e-7),
    "omega_p": (_positive_float, 1e16),
    "light_speed": (_positive_float, SPEED_OF_LIGHT),
    "checkpoints": (_int_list, DEFAULT_CHECKPOINTS),
    "k": (_positive_int, 500),
    "max_order": (_nonneg_int, 500),
    "max_index": (_positive_int, 500),
    "lambda_p": (_positive_float, None),
    "m2": (_nonneg_int, 200),
    "n2": (_positive_int, 200),
    "a_min": (_positive_float, None),
    "a_max": (_positive_float, None),
    "points": (_positive_int, 9),
    "p": (_float_list, (0.1, 0.5, 1.0, 2.0, 5.0)),
    "b_values": (_float_list, (1e-7, 2e-7, 4e-7)),
    "alpha_u": (_nonneg_float, None),
    "D": (_extent, 1e-6),
    "d": (_positive_float, 1e-7),
}

# not part of the result provenance
_NOT_PROVENANCE = {"out", "threads", "config"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add(parser, key, help_text, flag=None):
    conv, default = OPTIONS[key]
    flag = flag or "--" + key.replace("_", "-")
    shown = "" if default is None else f" (default {default})"
    parser.add_argument(flag, dest=key, type=conv, default=argparse.SUPPRESS, help=help_text + shown)


def build_parser():
    common = _Parser(add_help=False)
    _add(common, "format", "output format, csv or json")
    _add(common, "out", "write the result here instead of stdout")
    _add(common, "cache", "zero-cache file")
    _add(common, "threads", "worker threads, integer or auto")
    common.add_argument("--config", default=None, help="flat key=value file of defaults")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = _Parser(prog="cylcasimir", description="Casimir forces in a cylindrical cavity.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("zeros", parents=[common], help="build or validate the zero cache")
    _add(p, "max_order", "largest order m")
    _add(p, "max_index", "largest index n")

    p = sub.add_parser("table", parents=[common], help="I_a, I_b at cube checkpoints")
    _add(p, "alpha", "aspect ratio a/b")
    _add(p, "y_p", "dimensionless cutoff omega_p a / c")
    _add(p, "a", "radius in m, with --omega-p")
    _add(p, "omega_p", "plasma frequency in rad/s")
    _add(p, "light_speed", "speed of light used for omega_p -> u_p")
    _add(p, "checkpoints", "comma separated cube sizes")

    p = sub.add_parser("force", parents=[common], help="forces in newtons")
    _add(p, "a", "radius in m")
    _add(p, "b", "height in m")
    _add(p, "omega_p", "plasma frequency in rad/s")
    _add(p, "light_speed", "speed of light used for omega_p -> u_p")
    _add(p, "k", "cube truncation, at least 2")

    p = sub.add_parser("asym", parents=[common], help="asymptotic regimes")
    p.add_argument("mode", choices=("long-cylinder", "plates"))
    _add(p, "lambda_p", "long cylinder: cutoff wavenumber in 1/m (default omega_p/c)")
    _add(p, "omega_p", "long cylinder: plasma frequency if lambda_p is not given")
    _add(p, "m2", "long cylinder: largest order")
    _add(p, "n2", "long cylinder: largest radial index")
    _add(p, "a_min", "long cylinder: smallest radius")
    _add(p, "a_max", "long cylinder: largest radius")
    _add(p, "points", "long cylinder: log-spaced radii")
    _add(p, "p", "plates: comma separated cutoffs 2 beta_p b")
    _add(p, "b_values", "plates: comma separated separations for the pressure table")

    p = sub.add_parser("vacuum", parents=[common], help="uncertainty-bounded vacuum energy")
    p.add_argument("task", choices=("alpha-solve", "free-energy", "plate-energy"))
    _add(p, "alpha_u", "uncertainty constant (default: root of I = 1)")
    _add(p, "D", "free-space extent in m (inf allowed)")
    _add(p, "d", "plate separation in m")
    return parser


def read_config(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in OPTIONS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = OPTIONS[key][0](value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from None
    return out


def resolve(args):
    """Merge built-ins < config file < flags. Returns (config, explicit keys)."""
    cfg = {key: default for key, (_, default) in OPTIONS.items()}
    explicit = set()
    if args.config:
        from_file = read_config(args.config)
        cfg.update(from_file)
        explicit |= set(from_file)
    flags = {k: v for k, v in vars(args).items() if k in OPTIONS}
    cfg.update(flags)
    explicit |= set(flags)
    return cfg, explicit


# ---------------------------------------------------------------------------
# output


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _json_text(command, config, results, checksums, light_speed=None):
    constants = {"hbar": HBAR, "speed_of_light": SPEED_OF_LIGHT, "hbar_c": HBAR_C}
    if light_speed is not None:
        constants["cutoff_light_speed"] = light_speed
    doc = {
        "version": __version__,
        "command": command,
        "config": {k: (list(v) if isinstance(v, tuple) else v) for k, v in config.items()},
        "constants": constants,
        "results": results,
        "checksums": checksums,
    }
    return json.dumps(doc, indent=2, allow_nan=True) + "\n"


def _emit(text, out):
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        sys.stdout.write(text)


def _note(msg):
    print(msg, file=sys.stderr)


def _provenance(cfg, keys):
    return {k: cfg[k] for k in keys if k not in _NOT_PROVENANCE}


def _zero_table(cfg, max_order, max_index):
    path = Path(cfg["cache"]) if cfg["cache"] else default_cache_dir() / CACHE_FILE
    table, status = load_or_build_zero_table(max_order, max_index, path)
    log.info("zero table %s from %s", status, path)
    return table, status, path


# ---------------------------------------------------------------------------
# subcommands


def cmd_zeros(cfg, explicit):
    M, N = cfg["max_order"], cfg["max_index"]
    t0 = time.perf_counter()
    table, status, path = _zero_table(cfg, M, N)
    elapsed = time.perf_counter() - t0
    try:
        worst = table.validate(tol=table.accuracy)
    except ValueError as exc:
        raise NumericalError(f"zero table failed validation: {exc}") from None
    first = table.zero(0, 1)
    if cfg["format"] == "json":
        results = {
            "count": int(table.zeros.size),
            "max_order": M,
            "max_index": N,
            "accuracy": table.accuracy,
            "max_residual": worst,
            "x_0_1": first,
            "status": status,
        }
        text = _json_text("zeros", _provenance(cfg, ("max_order", "max_index")), results, {"zero_table": table.checksum})
    else:
        text = (
            f"zeros: {table.zeros.size} (m <= {M}, n <= {N})\n"
            f"x(0,1): {first:.6f}\n"
            f"accuracy: {table.accuracy:.1e}\n"
            f"max residual: {worst:.3e}\n"
            f"checksum: {table.checksum}\n"
        )
    _emit(text, cfg["out"])
    _note(f"cache {path}: {status} in {elapsed:.2f} s")
    return EXIT_OK


def _table_y_p(cfg, explicit):
    if "y_p" in explicit and explicit & {"a", "omega_p"}:
        raise UsageError("give either y_p or (a, omega_p), not both")
    if cfg["y_p"] is not None:
        return cfg["y_p"]
    return PlasmaCutoff(cfg["omega_p"], cfg["light_speed"]).y_p(CavityGeometry(cfg["a"], 1.0))


def cmd_table(cfg, explicit):
    y_p = _table_y_p(cfg, explicit)
    cps = cfg["checkpoints"]
    kmax = cps[-1]
    table, _, _ = _zero_table(cfg, kmax, kmax)
    report = force_sum_convergence(cfg["alpha"], y_p, table, cps, cfg["threads"])
    rows = [(k, float(ia), float(ib)) for k, ia, ib in zip(cps, report.values_a, report.values_b)]
    if cfg["format"] == "json":
        keys = ["alpha", "checkpoints"] + (["y_p"] if "y_p" in explicit else ["a", "omega_p", "light_speed"])
        prov = _provenance(cfg, keys)
        prov["y_p"] = y_p
        results = {"rows": [{"k": k, "I_a": ia, "I_b": ib} for k, ia, ib in rows]}
        text = _json_text("table", prov, results, {"zero_table": table.checksum}, cfg["light_speed"])
    else:
        text = _csv_text(("k", "I_a", "I_b"), rows)
    _emit(text, cfg["out"])
    return EXIT_OK


def cmd_force(cfg, explicit):
    k = cfg["k"]
    if k < 2:
        raise UsageError("force needs k >= 2 for the k - 1 ratio")
    geom = CavityGeometry(cfg["a"], cfg["b"])
    cutoff = PlasmaCutoff(cfg["omega_p"], cfg["light_speed"])
    table, _, _ = _zero_table(cfg, k, k)
    report = shell_sum(PhysicalForceTerm(table, geom, cutoff.u_p), (k - 1, k), cfg["threads"])
    pa = HBAR_C / (math.pi * geom.a**3)
    pb = math.pi * HBAR_C / geom.b**3
    (fa_lo, fb_lo), (fa, fb) = [(pa * float(x), pb * float(y)) for x, y in zip(report.values_a, report.values_b)]
    row = (k, fa, fb, fa / fa_lo, fb / fb_lo)
    if cfg["format"] == "json":
        prov = _provenance(cfg, ("a", "b", "omega_p", "light_speed", "k"))
        results = {
            "k": k,
            "F_a": fa,
            "F_b": fb,
            "F_a_prev": fa_lo,
            "F_b_prev": fb_lo,
            "ratio_a": row[3],
            "ratio_b": row[4],
            "y_p": cutoff.y_p(geom),
        }
        text = _json_text("force", prov, results, {"zero_table": table.checksum}, cfg["light_speed"])
    else:
        text = _csv_text(("k", "F_a", "F_b", "ratio_a", "ratio_b"), [row])
    _emit(text, cfg["out"])
    return EXIT_OK


def _long_cylinder(cfg, explicit):
    lam = cfg["lambda_p"]
    if lam is None:
        lam = cfg["omega_p"] / SPEED_OF_LIGHT
    M2, N2 = cfg["m2"], cfg["n2"]
    table, _, _ = _zero_table(cfg, M2, N2)
    lo, hi = asym.long_cylinder_regime(lam, table, M2, N2)
    lo = cfg["a_min"] or lo
    hi = cfg["a_max"] or hi
    if not hi > lo or cfg["points"] < 3:
        raise UsageError("need a_min < a_max and at least 3 points")
    a_values = [lo * (hi / lo) ** (i / (cfg["points"] - 1)) for i in range(cfg["points"])]
    rows, slope = asym.long_cylinder_scan(lam, a_values, table, M2, N2)
    _note(f"fitted force exponent: {slope:.4f}")
    if cfg["format"] == "json":
        prov = _provenance(cfg, ("m2", "n2", "points"))
        prov.update(lambda_p=lam, a_min=lo, a_max=hi)
        results = {
            "rows": [{"a": a, "F_per_b": f, "slope": s} for a, f, s in rows],
            "fitted_exponent": slope,
        }
        return _json_text("asym long-cylinder", prov, results, {"zero_table": table.checksum})
    return _csv_text(("a", "F_per_b", "slope"), rows)


def _plates(cfg, explicit):
    rows = [(p, asym.plate_cutoff_integral(p)) for p in cfg["p"]]
    pressure = {p: asym.plate_pressure_table(cfg["b_values"], p) for p in cfg["p"]}
    for p, tab in pressure.items():
        ratios = ", ".join(f"{r:.6g}" for _, _, r in tab)
        _note(f"p={p:g}: pressure / pressure(b0) = {ratios}")
    if cfg["format"] == "json":
        results = {
            "rows": [{"p": p, "I_p": i} for p, i in rows],
            "pressure": [
                {"p": p, "b": b, "pressure": pr, "ratio": r} for p, tab in pressure.items() for b, pr, r in tab
            ],
        }
        return _json_text("asym plates", _provenance(cfg, ("p", "b_values")), results, {})
    return _csv_text(("p", "I_p"), rows)


def cmd_asym(cfg, explicit, mode):
    text = _long_cylinder(cfg, explicit) if mode == "long-cylinder" else _plates(cfg, explicit)
    _emit(text, cfg["out"])
    return EXIT_OK


def cmd_vacuum(cfg, explicit, task):
    if task == "alpha-solve":
        root = vac.solve_alpha_for_unit_cutoff()
        pairs = [
            ("alpha_u", root),
            ("residual", vac.cutoff_number(root) - 1.0),
            ("I_gauss_legendre", vac.cutoff_number_gl(root)),
        ]
        prov = {}
    else:
        alpha_u = cfg["alpha_u"]
        if alpha_u is None:
            alpha_u = vac.solve_alpha_for_unit_cutoff()
        if task == "free-energy":
            D = cfg["D"]
            pairs = [
                ("closed_form", vac.free_vacuum_energy(alpha_u, D)),
                ("quadrature", 0.0 if math.isinf(D) else vac.free_vacuum_energy_quadrature(alpha_u, D)),
                ("frequency_bound", 0.0 if math.isinf(D) else vac.virtual_frequency_bound(alpha_u, D)),
            ]
            prov = {"alpha_u": alpha_u, "D": D}
        else:
            d = cfg["d"]
            via_i = vac.plate_energy_per_area(d, alpha_u)
            pairs = [
                ("cutoff_number", vac.cutoff_number(alpha_u)),
                ("energy_per_area", via_i),
                ("energy_per_area_direct", vac.plate_energy_per_area_direct(d, alpha_u)),
                ("coefficient_hbar_c_over_d3", via_i * d**3 / HBAR_C),
            ]
            prov = {"alpha_u": alpha_u, "d": d}
    if cfg["format"] == "json":
        text = _json_text(f"vacuum {task}", prov, dict(pairs), {})
    else:
        text = _csv_text(("quantity", "value"), pairs)
    _emit(text, cfg["out"])
    return EXIT_OK


def run(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    cfg, explicit = resolve(args)
    if args.command == "zeros":
        return cmd_zeros(cfg, explicit)
    if args.command == "table":
        return cmd_table(cfg, explicit)
    if args.command == "force":
        return cmd_force(cfg, explicit)
    if args.command == "asym":
        return cmd_asym(cfg, explicit, args.mode)
    return cmd_vacuum(cfg, explicit, args.task)


def main(argv=None):
    warnings.simplefilter("default", RuntimeWarning)
    try:
        return run(argv)
    except UsageError as exc:
        _note(f"usage error: {exc}")
        return EXIT_USAGE
    except (ValueError, IndexError) as exc:
        _note(f"invalid parameters: {exc}")
        return EXIT_USAGE
    except (NumericalError, QuadratureError, ArithmeticError, RuntimeError) as exc:
        _note(f"numerical failure: {exc}")
        return EXIT_NUMERIC
    except OSError as exc:
        _note(f"I/O failure: {exc}")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
