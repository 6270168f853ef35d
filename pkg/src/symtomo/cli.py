"""Command-line front end.

Subcommands::

    symtomo eval      --state S.json [--mu1 .. --nu2 | --mu M --nu N ...] [--grid ...]
                      [--marginal K] --out FILE [--format csv|json] [--echo-spec FILE]
    symtomo classify  --state S.json [--cutoff 3] [--samples 0,pi/4,pi/2,3pi/4]
                      [--grid ...] [--threshold 1e-4] [--out FILE]
    symtomo evolve    --state S.json --time T [--mode K] [--prefactor unitary|paper]
                      [params] [--grid ...] --out FILE [--sidecar FILE]
    symtomo selftest

Modes are numbered from 1 on the command line. Exit codes: 0 success,
1 self-test failure, 2 parse error, 3 domain error, 4 unsupported
configuration. Every error prints one line starting with ``ERROR <code>:``.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path

from . import separability
from .errors import ArgumentError, DomainError, SymtomoError, UnsupportedError
from .evolution import CONVENTIONS, evolve
from .selftest import run_selftest
from .states import Ensemble, SpecError, ensemble, load_spec, norm, position_moments
from .tomography import GridSpec, Tomogram, TomographyParams, eval_grid, marginal, tomogram

EXIT_OK, EXIT_SELFTEST, EXIT_PARSE, EXIT_DOMAIN, EXIT_UNSUPPORTED = 0, 1, 2, 3, 4
DEFAULT_AXIS = "-5:5:41"
VALUE_FLAGS = ("--grid", "--samples")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_PARSE, message)


def _angle(token: str) -> float:
    tok = token.strip().replace(" ", "")
    m = re.fullmatch(r"([-+]?\d*\.?\d*)\*?pi(?:/(\d+\.?\d*))?", tok)
    if m:
        num = m.group(1)
        scale = -1.0 if num == "-" else 1.0 if num in ("", "+") else float(num)
        return scale * math.pi / (float(m.group(2)) if m.group(2) else 1.0)
    try:
        return float(tok)
    except ValueError:
        raise CliError(EXIT_PARSE, f"cannot parse angle {token!r}") from None


def _add_state(p):
    p.add_argument("--state", required=True, help="state spec JSON file")


def _add_params(p):
    for name in ("mu1", "nu1", "mu2", "nu2"):
        p.add_argument(f"--{name}", type=float, default=None)
    p.add_argument("--mu", type=float, action="append", help="repeatable, one per mode")
    p.add_argument("--nu", type=float, action="append", help="repeatable, one per mode")


def _add_output(p, required=True):
    p.add_argument("--grid", help="min:max:count[,min:max:count...]")
    p.add_argument("--out", required=required)
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="symtomo", description="Symplectic tomograms of oscillator states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="tomogram (or a marginal) of a state on a grid")
    _add_state(p)
    _add_params(p)
    _add_output(p)
    p.add_argument("--marginal", type=int, help="keep only this mode (1-based)")
    p.add_argument("--echo-spec", help="write the parsed state spec back out as JSON")

    p = sub.add_parser("classify", help="separable vs. entangled within a Fock dictionary")
    _add_state(p)
    p.add_argument("--cutoff", type=int, default=3)
    p.add_argument("--samples", default="0,pi/4,pi/2,3pi/4", help="comma-separated angles per mode")
    p.add_argument("--grid", help="min:max:count[,min:max:count]")
    p.add_argument("--threshold", type=float, default=separability.DEFAULT_THRESHOLD)
    p.add_argument("--out", help="verdict JSON path (default: stdout)")

    p = sub.add_parser("evolve", help="inverted-oscillator evolution, then tomogram")
    _add_state(p)
    _add_params(p)
    _add_output(p)
    p.add_argument("--time", type=float, required=True)
    p.add_argument("--mode", type=int, default=1, help="evolved mode (1-based)")
    p.add_argument("--prefactor", choices=CONVENTIONS, default="unitary")
    p.add_argument("--sidecar", help="norm/variance JSON (default: OUT.evolve.json)")

    sub.add_parser("selftest", help="run the golden-fixture checks")
    return parser


def _load_state(path):
    try:
        spec = load_spec(path)
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read state file {path}: {exc.strerror}") from None
    return spec, spec.build()


def _params(args, n_modes: int) -> TomographyParams:
    if args.mu or args.nu:
        mu, nu = args.mu or [], args.nu or []
        if len(mu) != n_modes or len(nu) != n_modes:
            raise CliError(EXIT_PARSE, f"need {n_modes} --mu and --nu values, got {len(mu)} and {len(nu)}")
        return TomographyParams(tuple(mu), tuple(nu))
    mu = [args.mu1, args.mu2] + [None] * max(0, n_modes - 2)
    nu = [args.nu1, args.nu2] + [None] * max(0, n_modes - 2)
    mu = [0.0 if v is None else v for v in mu[:n_modes]]
    nu = [1.0 if v is None else v for v in nu[:n_modes]]
    return TomographyParams(tuple(mu), tuple(nu))


def _grid(text, ndim: int) -> GridSpec:
    return GridSpec.parse(text or ",".join([DEFAULT_AXIS] * ndim))


def _mode_index(k: int, n_modes: int, flag: str) -> int:
    if not 1 <= k <= n_modes:
        raise CliError(EXIT_PARSE, f"{flag} {k} out of range 1..{n_modes}")
    return k - 1


def _write(path, text: str):
    Path(path).write_text(text)


def _render(t: Tomogram, args, keep=None):
    if keep is not None:
        t = marginal(t, keep)
        grid = _grid(args.grid, 1)
        if len(grid.axes) > 1:
            grid = GridSpec((grid.axes[keep],))
    else:
        grid = _grid(args.grid, t.n_modes)
    data = eval_grid(t, grid)
    _write(args.out, data.to_csv() if args.format == "csv" else data.to_json())
    return t


def cmd_eval(args) -> int:
    spec, state = _load_state(args.state)
    if args.echo_spec:
        _write(args.echo_spec, spec.to_json())
    params = _params(args, state.n_modes)
    keep = None if args.marginal is None else _mode_index(args.marginal, state.n_modes, "--marginal")
    t = _render(tomogram(state, params), args, keep)
    print(f"normalization: {t.normalization():.17g}")
    return EXIT_OK


def cmd_classify(args) -> int:
    _, state = _load_state(args.state)
    if state.n_modes != 2:
        raise UnsupportedError(f"classification supports two modes, got {state.n_modes}")
    thetas = [_angle(tok) for tok in args.samples.split(",") if tok.strip()]
    cfg = separability.DictionaryConfig(
        fock_cutoff=args.cutoff,
        param_samples=separability.angle_samples(thetas, 2),
        grid=_grid(args.grid, 2),
    )
    verdict = separability.classify(state, cfg, args.threshold)
    text = verdict.to_json()
    if args.out:
        _write(args.out, text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_evolve(args) -> int:
    _, state = _load_state(args.state)
    if args.time < 0:
        raise DomainError(f"evolution time must be >= 0, got {args.time}")
    mode = _mode_index(args.mode, state.n_modes, "--mode")
    params = _params(args, state.n_modes)
    members = state.members if isinstance(state, Ensemble) else ((1.0, state),)
    evolved = [(w, evolve(s, args.time, mode, args.prefactor)) for w, s in members]
    # the plain prefactor is reported, not gated, on normalization
    check = args.prefactor == "unitary"
    if isinstance(state, Ensemble):
        t = tomogram(ensemble(evolved), params, check)
    else:
        t = tomogram(evolved[0][1], params, check)
    _render(t, args)

    norm_sq = sum(w * norm(s) ** 2 for w, s in evolved)
    m1 = m2 = 0.0
    for w, s in evolved:
        mean, var = position_moments(s, mode)
        m1 += w * mean
        m2 += w * (var + mean * mean)
    sidecar = {
        "t": args.time,
        "mode": args.mode,
        "prefactor": args.prefactor,
        "norm": math.sqrt(norm_sq),
        "norm_deficit": 1.0 - math.sqrt(norm_sq),
        "mean": m1,
        "variance": m2 - m1 * m1,
        "tomogram_normalization": t.normalization(),
    }
    _write(args.sidecar or f"{args.out}.evolve.json", json.dumps(sidecar, indent=2) + "\n")
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "classify": cmd_classify, "evolve": cmd_evolve,
            "selftest": lambda args: run_selftest()}


def _attach_values(argv):
    # "--grid -5:5:41" would otherwise be read as an unknown option
    out, it = [], iter(argv)
    for tok in it:
        if tok in VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and not nxt.startswith("--"):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_attach_values(argv))
        return COMMANDS[args.command](args)
    except CliError as exc:
        code, msg = exc.code, str(exc)
    except SpecError as exc:
        code, msg = EXIT_PARSE, f"invalid state spec: {exc}"
    except UnsupportedError as exc:
        code, msg = EXIT_UNSUPPORTED, str(exc)
    except DomainError as exc:
        code, msg = EXIT_DOMAIN, str(exc)
    except (ArgumentError, SymtomoError) as exc:
        code, msg = EXIT_PARSE, str(exc)
    print(f"ERROR {code}: " + " ".join(msg.split()), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
