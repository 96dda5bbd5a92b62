"""Command-line interface: ``pronylattice {classify,ladder,eval,verify,table}``.

Exit status is 0 on success, 1 when a verification fails and 2 on invalid
input.  Curves are written as CSV with 17 significant digits so that they
round-trip through IEEE doubles.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .classify import REASON_JSON, TABLE_REASON, classify, strip_grid, verify_constitutive
from .errors import NonConvergent, PronyLatticeError
from .exact import parse_number
from .ladder import (
    DEFAULT_Q,
    PronyLadder,
    eval_modulus,
    eval_time,
    ladder_for_spec,
    normalize_sum_rule,
)
from .lattice import Progression
from .models import (
    DISPLAY_NAMES,
    MODEL_NAMES,
    ModelSpec,
    canonical_name,
    forward_modulus,
    model_fields,
    modulus,
    relaxation_strength,
    spectrum,
)
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2
VERIFY_THRESHOLD = 1e-6

# parameters for the table reproduction
TABLE_DEFAULTS = {"alpha": "3/5", "beta_exp": "1/2", "delta_zener": "1/2", "sigma": 1.0, "mu": 0.0}

# flag destination -> ModelSpec field
_MODEL_FLAGS = {
    "g_inf": "g_inf",
    "delta_g": "delta_g",
    "g": "g",
    "tau": "tau",
    "alpha": "alpha",
    "beta": "beta_exp",
    "delta": "delta_zener",
    "mu": "mu",
    "sigma": "sigma",
    "g0": "g0",
}


class InputError(Exception):
    """Bad command-line input; reported with exit status 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec: Optional[ModelSpec]
    ladder_path: Optional[str]
    output_path: Optional[str]
    fmt: Optional[str]
    omega: Optional[Tuple[float, float, int]]
    time: Optional[Tuple[float, float, int]]
    q: Optional[float]
    n_half: Optional[int]
    tau0: Optional[float]
    span_decades: Optional[float]
    normalize: bool
    quadrature: QuadratureSpec
    candidates: Tuple[Progression, ...] = ()


def _positive_float(text: str) -> float:
    try:
        v = float(parse_number(text))
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return v


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    m = shared.add_argument_group("model")
    m.add_argument("--model", help=f"one of {', '.join(MODEL_NAMES)}")
    m.add_argument("--spec", metavar="PATH", help="model spec JSON file")
    m.add_argument("--g-inf", help="equilibrium modulus (G_e for fractional-zener)")
    m.add_argument("--delta-g", help="relaxation strength")
    m.add_argument("--g", help="Maxwell/SLS mode weight")
    m.add_argument("--tau", help="relaxation time")
    m.add_argument("--alpha", help="fractional order, e.g. 3/5")
    m.add_argument("--beta", help="asymmetry or power-law exponent, e.g. 1/2")
    m.add_argument("--delta", help="fractional-zener ratio")
    m.add_argument("--mu", help="log-normal centre")
    m.add_argument("--sigma", help="log-normal width")
    m.add_argument("--g0", help="power-law prefactor")
    lad = shared.add_argument_group("ladder")
    lad.add_argument("--tau0", help="ladder centre (power-law: model time scale)")
    lad.add_argument("--q", type=_positive_float, help=f"grid ratio (default {DEFAULT_Q:.6g})")
    lad.add_argument("--span-decades", type=_positive_float)
    lad.add_argument("--n-half", type=int)
    lad.add_argument("--normalize", action="store_true", help="rescale weights to the sum rule")
    lad.add_argument("--ladder", metavar="PATH", help="ladder JSON file")
    grid = shared.add_argument_group("grid")
    grid.add_argument("--omega", nargs=3, metavar=("MIN", "MAX", "N"))
    grid.add_argument("--omega-min", type=_positive_float)
    grid.add_argument("--omega-max", type=_positive_float)
    grid.add_argument("--points", type=int)
    grid.add_argument("--time", nargs=3, metavar=("T0", "T1", "N"))
    shared.add_argument(
        "--candidates", metavar="A:B,...",
        help="candidate lattices Gamma(A s + B) for classify (default 1:0,1:1,1:2)",
    )
    io_ = shared.add_argument_group("output")
    io_.add_argument("--format", choices=("json", "csv", "text"))
    io_.add_argument("--out", metavar="PATH")
    quad = shared.add_argument_group("quadrature")
    quad.add_argument("--quad-points", type=int, default=DEFAULT_QUADRATURE.abscissa_count)
    quad.add_argument("--quad-tol", type=float, default=DEFAULT_QUADRATURE.tolerance)

    parser = argparse.ArgumentParser(prog="pronylattice", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[shared], help="finite-Prony verdict for a model")
    sub.add_parser("ladder", parents=[shared], help="synthesize a geometric Prony ladder")
    sub.add_parser("eval", parents=[shared], help="evaluate a modulus or relaxation curve")
    sub.add_parser("verify", parents=[shared], help="check the Mellin constitutive identity")
    sub.add_parser("table", parents=[shared], help="classify the whole catalogue")
    return parser


def _model_from_args(args, defaults: Optional[dict] = None) -> Optional[ModelSpec]:
    if args.spec and args.model:
        raise InputError("give either --model or --spec, not both")
    if args.spec:
        try:
            with open(args.spec, encoding="utf-8") as fh:
                return ModelSpec.from_json(json.load(fh))
        except OSError as exc:
            raise InputError(f"cannot read spec file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"spec file is not valid JSON: {exc}") from exc
    if not args.model:
        return None
    kwargs = dict(defaults or {})
    for flag, field_name in _MODEL_FLAGS.items():
        v = getattr(args, flag)
        if v is not None:
            kwargs[field_name] = v
    name = canonical_name(args.model)
    if name == "fractional-zener" and "g_inf" in kwargs:
        kwargs["g_e"] = kwargs.pop("g_inf")
    if name == "power-law" and args.tau0 is not None:
        kwargs["tau0"] = args.tau0
    fields = model_fields(name)
    unused = [k for k in kwargs if k not in fields and not (defaults and k in defaults)]
    if unused:
        raise InputError(f"{name} does not take {', '.join(sorted(unused))}")
    spec = ModelSpec(name, **{k: v for k, v in kwargs.items() if k in fields})
    return spec


def _grid(triple, label: str, allow_zero: bool = False) -> np.ndarray:
    try:
        lo, hi, n = float(parse_number(triple[0])), float(parse_number(triple[1])), int(triple[2])
    except (TypeError, ValueError) as exc:
        raise InputError(f"{label}: {exc}") from exc
    if n < 1:
        raise InputError(f"{label}: need at least one point")
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise InputError(f"{label}: range must be finite and ordered")
    if lo < 0 or (lo == 0 and not allow_zero) or hi <= 0:
        raise InputError(f"{label}: range must be positive")
    if lo == 0:
        return np.linspace(0.0, hi, n)
    if n == 1:
        return np.array([lo])
    return np.logspace(math.log10(lo), math.log10(hi), n)


def make_config(args) -> RunConfig:
    omega = None
    if args.omega is not None:
        omega = tuple(args.omega)
    elif any(v is not None for v in (args.omega_min, args.omega_max, args.points)):
        if None in (args.omega_min, args.omega_max, args.points):
            raise InputError("--omega-min, --omega-max and --points go together")
        omega = (args.omega_min, args.omega_max, args.points)
    if omega is not None and args.time is not None:
        raise InputError("choose one of a frequency grid or --time")
    if args.command == "verify" and args.model and canonical_name(args.model) not in ("maxwell", "sls"):
        raise InputError(f"closed-form H~ unavailable for {canonical_name(args.model)}")
    spec = _model_from_args(args, TABLE_DEFAULTS if args.command == "table" else None)
    tau0 = None
    if args.tau0 is not None and (spec is None or spec.name != "power-law"):
        tau0 = _positive_float(args.tau0)
        if not tau0 > 0:
            raise InputError("--tau0 must be positive")
    if args.n_half is not None and args.n_half < 0:
        raise InputError("--n-half must be >= 0")
    if args.q is not None and not args.q > 1:
        raise InputError("--q must be > 1")
    try:
        quad = QuadratureSpec(args.quad_points, DEFAULT_QUADRATURE.log_range, args.quad_tol)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return RunConfig(
        command=args.command,
        spec=spec,
        ladder_path=args.ladder,
        output_path=args.out,
        fmt=args.format,
        omega=omega,
        time=tuple(args.time) if args.time is not None else None,
        q=args.q,
        n_half=args.n_half,
        tau0=tau0,
        span_decades=args.span_decades,
        normalize=args.normalize,
        quadrature=quad,
        candidates=parse_candidates(args.candidates) if args.candidates else (),
    )


# --------------------------------------------------------------------------
# output helpers
# --------------------------------------------------------------------------


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


def _csv(header: Sequence[str], columns: Sequence[np.ndarray]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in zip(*columns):
        w.writerow(["%.17g" % v for v in row])
    return buf.getvalue()


def _require_spec(cfg: RunConfig) -> ModelSpec:
    if cfg.spec is None:
        raise InputError("a model is required (--model or --spec)")
    return cfg.spec


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def parse_candidates(text: str) -> Tuple[Progression, ...]:
    """``"1:0,1/2:1/3"`` -> lattices of ``Gamma(s)`` and ``Gamma(s/2 + 1/3)``."""
    out = []
    for item in text.split(","):
        try:
            a, b = item.split(":")
            out.append(Progression(parse_number(a), parse_number(b)))
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad candidate {item!r}: expected SCALE:SHIFT") from exc
    return tuple(out)


def cmd_classify(cfg: RunConfig) -> int:
    spec = _require_spec(cfg)
    verdict = classify(spec, cfg.candidates) if cfg.candidates else classify(spec)
    _emit(json.dumps(verdict.to_json(), indent=2) + "\n", cfg.output_path)
    return EXIT_OK


def _build_ladder(cfg: RunConfig, spec: ModelSpec) -> PronyLadder:
    lad = ladder_for_spec(spec, q=cfg.q, n_half=cfg.n_half, tau0=cfg.tau0, span_decades=cfg.span_decades)
    if cfg.normalize:
        target = relaxation_strength(spec)
        if target is None:
            raise InputError(f"{spec.name} has no finite sum rule to normalise to")
        lad = normalize_sum_rule(lad, target)
    return lad


def cmd_ladder(cfg: RunConfig) -> int:
    spec = _require_spec(cfg)
    lad = _build_ladder(cfg, spec)
    _emit(json.dumps(lad.to_json(), indent=2) + "\n", cfg.output_path)
    print(
        f"{len(lad.modes)} modes, sum g = {lad.total_weight:.12g}, "
        f"boundary-weight truncation estimate = {lad.truncation_estimate:.3e}",
        file=sys.stderr,
    )
    return EXIT_OK


def _load_ladder(path: str) -> PronyLadder:
    try:
        with open(path, encoding="utf-8") as fh:
            return PronyLadder.from_json(json.load(fh))
    except OSError as exc:
        raise InputError(f"cannot read ladder file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"ladder file is not valid JSON: {exc}") from exc


def cmd_eval(cfg: RunConfig) -> int:
    if cfg.ladder_path and cfg.spec is not None:
        raise InputError("give either --ladder or a model, not both")
    lad = _load_ladder(cfg.ladder_path) if cfg.ladder_path else None
    spec = None if lad is not None else _require_spec(cfg)
    fmt = cfg.fmt or "csv"
    if cfg.time is not None:
        t = _grid(cfg.time, "--time", allow_zero=True)
        if lad is None:
            lad = _build_ladder(cfg, spec)
        g = np.asarray(eval_time(lad, t), dtype=float)
        if fmt == "json":
            text = json.dumps({"t": t.tolist(), "g": g.tolist()}) + "\n"
        else:
            text = _csv(("t", "g"), (t, g))
        _emit(text, cfg.output_path)
        return EXIT_OK
    w = _grid(cfg.omega or ("1e-3", "1e3", "61"), "omega")
    if lad is not None:
        gs = eval_modulus(lad, w)
    elif spec.name == "log-normal":
        gs = forward_modulus(spectrum(spec), w)
    else:
        gs = modulus(spec, w)
    gs = np.asarray(gs, dtype=complex)
    if fmt == "json":
        text = json.dumps({"omega": w.tolist(), "re_g": gs.real.tolist(), "im_g": gs.imag.tolist()}) + "\n"
    else:
        text = _csv(("omega", "re_g", "im_g"), (w, gs.real, gs.imag))
    _emit(text, cfg.output_path)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    spec = _require_spec(cfg)
    if spec.name not in ("maxwell", "sls"):
        raise InputError(f"closed-form H~ unavailable for {spec.name}")
    grid = strip_grid(spec.kernel)
    residual = verify_constitutive(spec, grid, cfg.quadrature)
    ok = residual <= VERIFY_THRESHOLD
    report = {"model": spec.name, "points": len(grid), "max_residual": residual, "pass": ok}
    if cfg.fmt == "json":
        _emit(json.dumps(report) + "\n", cfg.output_path)
    else:
        _emit(f"{spec.name}: max residual {residual:.3e} over {len(grid)} points: "
              f"{'PASS' if ok else 'FAIL'}\n", cfg.output_path)
    return EXIT_OK if ok else EXIT_VERIFY


def table_specs(overrides: Optional[dict] = None) -> List[ModelSpec]:
    """The eight catalogue models at the table parameters."""
    params = {**TABLE_DEFAULTS, **(overrides or {})}
    return [ModelSpec(n, **{k: v for k, v in params.items() if k in model_fields(n)}) for n in MODEL_NAMES]


def _table_rows(specs: Sequence[ModelSpec]):
    rows = []
    for spec in specs:
        v = classify(spec)
        rows.append({
            "model": spec.name,
            "display": DISPLAY_NAMES[spec.name],
            "in_p": v.in_p,
            "in_q": v.verdict_class != "NotInQ",
            "class": v.to_json(with_trace=False)["class"],
            "reason": REASON_JSON[v.reason],
            "obstruction": TABLE_REASON[spec.name] if not v.in_p else TABLE_REASON["maxwell"],
            "verdict": v.to_json(with_trace=False),
        })
    return rows


def _format_tables(rows) -> str:
    yes = lambda b: "Yes" if b else "No"  # noqa: E731
    finite = [r for r in rows if r["in_p"]]
    other = [r for r in rows if not r["in_p"]]
    width = max(len(r["display"]) for r in rows) + 2
    lines = ["Finite Prony representable models", ""]
    lines.append(f"{'Model':<{width}}{'In P':<6}{'In Q':<6}Obstruction")
    lines += [f"{r['display']:<{width}}{yes(r['in_p']):<6}{yes(r['in_q']):<6}{r['obstruction']}" for r in finite]
    lines += ["", "Transcendental and non-Q models", ""]
    lines.append(f"{'Model':<{width}}{'In P':<6}{'In Q':<6}Obstruction")
    lines += [f"{r['display']:<{width}}{yes(r['in_p']):<6}{yes(r['in_q']):<6}{r['obstruction']}" for r in other]
    return "\n".join(lines) + "\n"


def cmd_table(cfg: RunConfig) -> int:
    rows = _table_rows(table_specs())
    if cfg.fmt == "json":
        text = json.dumps([r["verdict"] | {"in_p": r["in_p"], "in_q": r["in_q"]} for r in rows], indent=2) + "\n"
    elif cfg.fmt == "csv":
        text = _csv_rows(rows)
    else:
        text = _format_tables(rows)
    _emit(text, cfg.output_path)
    return EXIT_OK


def _csv_rows(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("model", "in_p", "in_q", "class", "reason"))
    for r in rows:
        w.writerow((r["model"], r["in_p"], r["in_q"], r["class"], r["reason"]))
    return buf.getvalue()


COMMANDS = {
    "classify": cmd_classify,
    "ladder": cmd_ladder,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "table": cmd_table,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        return COMMANDS[cfg.command](cfg)
    except NonConvergent as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (InputError, PronyLatticeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
