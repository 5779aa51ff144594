"""Command-line interface: ``photonsep {density,amplitude,jsums,kernel,validate}``.

Tables go to ``--output`` (or stdout) as CSV or JSON; diagnostics go to
stderr. Exit codes: 0 success, 1 configuration error, 2 numerical
non-convergence, 3 failed validation check.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from . import scattering_model as sm
from .photon_pair import PhotonChannel, separation_kernel
from .quadrature import QuadratureError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VALIDATE = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _helicity(text):
    val = int(text)
    if val not in (-1, 1):
        raise argparse.ArgumentTypeError(f"helicity must be +1 or -1, got {text}")
    return val


def _add_physics(p, with_helicity=True):
    p.add_argument("--epsilon", type=float, default=0.001, help="sigma_k / k0, in (0, 0.2]")
    p.add_argument("--k0", type=float, default=1.0, help="central momentum")
    p.add_argument("--R", type=float, default=None, help="initial separation (default 1/(2 eps^1.5 k0))")
    if with_helicity:
        p.add_argument("--lambda1", type=_helicity, default=1)
        p.add_argument("--lambda2", type=_helicity, default=-1)


def _add_grid(p):
    p.add_argument("--points", type=int, default=201, help="number of r grid points")
    p.add_argument("--r-min", dest="r_min", type=float, default=None)
    p.add_argument("--r-max", dest="r_max", type=float, default=None)


def _add_common(p, default_format="csv"):
    p.add_argument("--config", type=Path, default=None, help="key=value file; flags override it")
    p.add_argument("-o", "--output", type=Path, default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="photonsep", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("density", help="separation probability density")
    _add_physics(p)
    _add_grid(p)
    p.add_argument("--mode", choices=sm.MODES, default=sm.ASYMPTOTIC)
    p.add_argument("--jmax-tol", dest="jmax_tol", type=float, default=sm.J_SUM_TAIL_TOL)
    p.add_argument("--workers", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("amplitude", help="separation amplitude of one J channel")
    _add_physics(p)
    _add_grid(p)
    p.add_argument("--J", dest="J", type=int, required=True)
    p.add_argument("--mode", choices=sm.MODES, default=sm.ASYMPTOTIC)
    p.add_argument("--exchange", action="store_true", help="exchange term instead of direct")
    _add_common(p)

    p = sub.add_parser("jsums", help="direct and alternating J sums")
    p.add_argument("--epsilon", type=float, default=0.001)
    p.add_argument("--J-min", dest="J_min", type=int, default=0)
    p.add_argument("--jmax-tol", dest="jmax_tol", type=float, default=sm.J_SUM_TAIL_TOL)
    p.add_argument("--jmax", dest="jmax", type=int, default=None, help="explicit truncation index")
    _add_common(p, default_format="json")

    p = sub.add_parser("kernel", help="momentum-separation kernel sqrt(2/pi) k r j_l(k r)")
    p.add_argument("--J", dest="J", type=int, default=2)
    p.add_argument("--lambda1", type=_helicity, default=1)
    p.add_argument("--lambda2", type=_helicity, default=-1)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--r-min", dest="r_min", type=float, default=0.0)
    p.add_argument("--r-max", dest="r_max", type=float, default=50.0)
    _add_common(p)

    p = sub.add_parser("validate", help="run the built-in invariant suite")
    p.add_argument("--check", action="append", default=None, help="run only this check (repeatable)")
    p.add_argument("--tamper", action="append", default=[], help=argparse.SUPPRESS)
    p.add_argument("--config", type=Path, default=None, help=argparse.SUPPRESS)
    p.add_argument("-o", "--output", type=Path, default=None)
    return parser


def _subparser(parser, command):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)


def _read_config(path, sub):
    """Parse a key=value file into typed defaults for ``sub``."""
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    aliases = {k.replace("_", "-"): k for k in actions}
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        dest = aliases.get(key, key)
        if dest not in actions:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        action = actions[dest]
        try:
            if isinstance(action, argparse._StoreTrueAction):
                typed = value.lower() in ("1", "true", "yes", "on")
            elif action.type is not None:
                typed = action.type(value)
            else:
                typed = value
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise ConfigError(f"{path}:{n}: bad value for {key!r}: {exc}") from None
        if action.choices is not None and typed not in action.choices:
            raise ConfigError(f"{path}:{n}: {key!r} must be one of {list(action.choices)}")
        out[dest] = typed
    return out


def parse_config(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None) is not None:
        sub = _subparser(parser, args.command)
        defaults = _read_config(args.config, sub)
        for a in sub._actions:
            if a.dest in defaults:
                a.required = False
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


# ---------------------------------------------------------------------------


def _params(args):
    return sm.WavepacketParams(k0=args.k0, epsilon=args.epsilon, lambda1=args.lambda1,
                               lambda2=args.lambda2, R=args.R)


def _grid(args, params):
    if args.points < 2:
        raise ConfigError("--points must be >= 2")
    if args.r_min is None and args.r_max is None:
        return sm.default_r_grid(params, args.points)
    base = sm.default_r_grid(params, 2)
    lo = base[0] if args.r_min is None else args.r_min
    hi = base[-1] if args.r_max is None else args.r_max
    if not 0 < lo < hi:
        raise ConfigError(f"need 0 < r_min < r_max, got {lo}, {hi}")
    return np.linspace(lo, hi, args.points)


def _meta(params, mode, jmax, extra=None):
    meta = {"tool": "photonsep", "version": __version__}
    if params is not None:
        meta.update(params.as_dict())
    meta.update({"mode": mode, "j_max": jmax})
    if extra:
        meta.update(extra)
    return meta


def _csv(columns, rows):
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in zip(*rows):
        buf.write(",".join("%.17g" % v for v in row) + "\n")
    return buf.getvalue()


def _emit(args, columns, rows, meta, stdout, stderr):
    if args.format == "json":
        payload = {"meta": meta, "data": {c: [float(v) for v in r] for c, r in zip(columns, rows)}}
        text = json.dumps(payload, indent=2) + "\n"
        meta_text = None
    else:
        text = _csv(columns, rows)
        meta_text = json.dumps(meta, indent=2, sort_keys=True) + "\n"
    if args.output is None:
        stdout.write(text)
        if meta_text:
            stderr.write(meta_text)
    else:
        args.output.write_text(text)
        if meta_text:
            Path(str(args.output) + ".meta.json").write_text(meta_text)


def _cmd_density(args, stdout, stderr):
    params = _params(args)
    if not 0 < args.jmax_tol < 1:
        raise ConfigError("--jmax-tol must lie in (0, 1)")
    r = _grid(args, params)
    prof = sm.separation_density(params, r, mode=args.mode, tail_tol=args.jmax_tol, workers=args.workers)
    extra = {"norm": prof.norm, "quadrature_error": prof.error_estimate, "jmax_tol": args.jmax_tol}
    if prof.norm > 0.5:
        extra["mean_separation"] = sm.expectation_separation(prof)
    _emit(args, ["r", "rho"], [prof.r_grid, prof.rho], _meta(params, args.mode, prof.j_max, extra), stdout, stderr)


def _cmd_amplitude(args, stdout, stderr):
    params = _params(args)
    r = _grid(args, params)
    prof = sm.amplitude_profile(params, args.J, r, mode=args.mode, exchange=args.exchange)
    extra = {"J": args.J, "exchange": args.exchange, "quadrature_error": prof.error_estimate}
    _emit(args, ["r", "re", "im"], [r, prof.values.real, prof.values.imag],
          _meta(params, args.mode, None, extra), stdout, stderr)


def _cmd_jsums(args, stdout, stderr):
    if not 0 < args.epsilon <= 0.2:
        raise ConfigError(f"--epsilon must lie in (0, 0.2], got {args.epsilon}")
    if not 0 < args.jmax_tol < 1:
        raise ConfigError("--jmax-tol must lie in (0, 1)")
    if args.J_min < 0:
        raise ConfigError("--J-min must be >= 0")
    top = sm.j_max(args.epsilon, args.jmax_tol) if args.jmax is None else args.jmax
    direct = sm.j_sum_direct(args.epsilon, args.J_min, J_max=top)
    alt = sm.j_sum_alternating(args.epsilon, args.J_min, J_max=top)
    meta = {"tool": "photonsep", "version": __version__, "epsilon": args.epsilon,
            "J_min": args.J_min, "j_max": top, "jmax_tol": args.jmax_tol}
    if args.format == "json":
        text = json.dumps({"direct": direct, "alternating": alt, "meta": meta}, indent=2) + "\n"
        if args.output is None:
            stdout.write(text)
        else:
            args.output.write_text(text)
    else:
        _emit(args, ["direct", "alternating"], [[direct], [alt]], meta, stdout, stderr)


def _cmd_kernel(args, stdout, stderr):
    if args.points < 2 or not 0 <= args.r_min < args.r_max:
        raise ConfigError("need points >= 2 and 0 <= r_min < r_max")
    if not args.k > 0:
        raise ConfigError("--k must be > 0")
    try:
        channel = PhotonChannel.overlap_channel(args.J, args.lambda1, args.lambda2)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    r = np.linspace(args.r_min, args.r_max, args.points)
    y = np.array([separation_kernel(channel, args.k, float(x)) for x in r])
    meta = {"tool": "photonsep", "version": __version__, "J": args.J, "ell": channel.ell,
            "lambda1": args.lambda1, "lambda2": args.lambda2, "k": args.k}
    _emit(args, ["r", "kernel"], [r, y], meta, stdout, stderr)


def _cmd_validate(args, stdout, stderr):
    from .validation import check_names, run_checks

    names = args.check
    bad = set(names or ()) | set(args.tamper)
    bad -= set(check_names())
    if bad:
        raise ConfigError(f"unknown check(s): {', '.join(sorted(bad))}")
    results = run_checks(names, tamper=tuple(args.tamper))
    report = {
        "version": __version__,
        "passed": all(r.passed for r in results),
        "checks": [r.as_dict() for r in results],
    }
    text = json.dumps(report, indent=2) + "\n"
    if args.output is None:
        stdout.write(text)
    else:
        args.output.write_text(text)
    for r in results:
        if not r.passed:
            stderr.write(f"FAIL {r.name}: measured {r.measured:.3e} > tolerance {r.tolerance:.3e}"
                         + (f" ({r.error})" if r.error else "") + "\n")
    return EXIT_OK if report["passed"] else EXIT_VALIDATE


COMMANDS = {
    "density": _cmd_density,
    "amplitude": _cmd_amplitude,
    "jsums": _cmd_jsums,
    "kernel": _cmd_kernel,
    "validate": _cmd_validate,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, execute, and return the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = parse_config(argv)
    except ConfigError as exc:
        stderr.write(f"photonsep: error: {exc}\n")
        return EXIT_CONFIG
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    with warnings.catch_warnings():
        warnings.simplefilter("always")
        warnings.showwarning = lambda msg, cat, *a, **k: stderr.write(f"photonsep: warning: {msg}\n")
        try:
            status = COMMANDS[args.command](args, stdout, stderr)
        except ConfigError as exc:
            stderr.write(f"photonsep: error: {exc}\n")
            return EXIT_CONFIG
        except QuadratureError as exc:
            est = exc.error_estimate if exc.error_estimate is not None else math.nan
            stderr.write(f"photonsep: non-convergence: {exc} (estimate {est:.3g}, panels {exc.panels})\n")
            return EXIT_NUMERIC
        except ValueError as exc:
            stderr.write(f"photonsep: error: {exc}\n")
            return EXIT_CONFIG
    return EXIT_OK if status is None else status


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
