"""Command line: ``helixforge <construct|hermite|rmf|sweep> --config FILE --out DIR``.

Each job is one JSON document with a ``command`` field. Exact numbers are
written as strings ("-1/3", "2*sqrt(13)") so nothing is lost in transit.

Exit codes: 0 ok, 2 bad config, 3 construction or interpolation failure,
4 approximation failure, 5 surface failure, 10 internal invariant violation.
"""

import argparse
import hashlib
import json
import logging
import os
import sys
import warnings

import jsonschema
import mpmath
import numpy as np

from . import __version__
from .curves import curve_cusps, ph_curve_from_tangent, rational_bezier3, stereographic_tangent
from .errors import HelixForgeError, RemezStagnation, SingularPoint
from .field import ExpressionError, RatFun, parse_ratfun
from .helix import helix_from_a3
from .hermite import HermiteData, interpolate
from .rmf import approximate_rmf
from .surface import ProfileCurve, _atomic_write, curvature_csv_text, obj_text, sample_mesh, sweep

log = logging.getLogger("helixforge")

EXIT_OK, EXIT_SCHEMA, EXIT_INTERP, EXIT_APPROX, EXIT_SURFACE, EXIT_INTERNAL = 0, 2, 3, 4, 5, 10

# --- schema -----------------------------------------------------------------

_num = {"type": ["string", "number"]}
_vec3 = {"type": "array", "items": _num, "minItems": 3, "maxItems": 3}

_a3 = {
    "oneOf": [
        {"type": "string"},
        {
            "type": "object",
            "properties": {
                "bezier": {
                    "type": "object",
                    "properties": {
                        "c": {"type": "array", "items": _num, "minItems": 4, "maxItems": 4},
                        "w": {"type": "array", "items": _num, "minItems": 2, "maxItems": 2},
                    },
                    "required": ["c", "w"],
                    "additionalProperties": False,
                }
            },
            "required": ["bezier"],
            "additionalProperties": False,
        },
    ]
}

_curve = {
    "type": "object",
    "properties": {
        "b1": {"type": "string"},
        "b2": {"type": "string"},
        "v": {"type": "array", "items": {"type": "string"}, "minItems": 3, "maxItems": 3},
        "a3": _a3,
        "orientation": {"enum": ["curvature", "acute"]},
    },
    "required": ["a3"],
    "oneOf": [{"required": ["b1", "b2"]}, {"required": ["v"]}],
    "additionalProperties": False,
}

_helix = dict(_curve, oneOf=[{"required": ["b1", "b2"]}])

_common = {"command": {}, "seed": {"type": "integer"}, "precision": {"type": "integer", "minimum": 15, "maximum": 1000}}

SCHEMAS = {
    "construct": {
        "type": "object",
        "properties": {**_common, "curve": _curve, "samples": {"type": "integer", "minimum": 2}},
        "required": ["command", "curve"],
        "additionalProperties": False,
    },
    "hermite": {
        "type": "object",
        "properties": {
            **_common,
            "p0": _vec3,
            "t0": _vec3,
            "p1": _vec3,
            "t1": _vec3,
            "mode": {"enum": ["line", "circle"]},
            "shape": {"type": "array", "items": _num, "minItems": 2, "maxItems": 2},
            "allow_negative": {"type": "boolean"},
            "orientation": {"enum": ["curvature", "acute"]},
            "samples": {"type": "integer", "minimum": 2},
        },
        "required": ["command", "p0", "t0", "p1", "t1"],
        "additionalProperties": False,
    },
    "rmf": {
        "type": "object",
        "properties": {
            **_common,
            "helix": _helix,
            "m": {"type": "integer", "minimum": 0, "maximum": 12},
            "k": {"type": "integer", "minimum": 0, "maximum": 12},
            "theta0": {"oneOf": [{"enum": ["zero", "compat"]}, {"type": "number"}]},
            "norm": {"enum": ["abs", "rel"]},
            "samples": {"type": "integer", "minimum": 2},
        },
        "required": ["command", "helix", "m", "k"],
        "additionalProperties": False,
    },
    "sweep": {
        "type": "object",
        "properties": {
            **_common,
            "spine": _helix,
            "frame": {
                "type": "object",
                "properties": {
                    "kind": {"enum": ["approx-rmf", "fsf"]},
                    "m": {"type": "integer", "minimum": 0, "maximum": 12},
                    "k": {"type": "integer", "minimum": 0, "maximum": 12},
                    "theta0": {"oneOf": [{"enum": ["zero", "compat"]}, {"type": "number"}]},
                    "norm": {"enum": ["abs", "rel"]},
                },
                "required": ["kind"],
                "additionalProperties": False,
            },
            "profile": {
                "type": "object",
                "properties": {
                    "kind": {"enum": ["line", "rational", "polyline"]},
                    "c1": {},
                    "c2": {},
                    "points": {"type": "array", "items": {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}},
                    "domain": {"type": "array", "items": _num, "minItems": 2, "maxItems": 2},
                },
                "required": ["kind"],
                "additionalProperties": False,
            },
            "grid": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 2, "maxItems": 2},
            "curvature": {"type": "boolean"},
            "threshold": {"type": "number"},
        },
        "required": ["command", "spine", "frame", "profile"],
        "additionalProperties": False,
    },
}


class ConfigError(Exception):
    pass


def validate(cfg):
    if not isinstance(cfg, dict) or cfg.get("command") not in SCHEMAS:
        raise ConfigError(f"'command' must be one of {sorted(SCHEMAS)}")
    try:
        jsonschema.validate(cfg, SCHEMAS[cfg["command"]])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None
    return cfg


# --- helpers ----------------------------------------------------------------


def _g(x):
    return format(float(x), ".17g")


def _s(x):
    return str(x)


def _dump(path, obj):
    _atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _build_a3(desc):
    if isinstance(desc, str):
        return parse_ratfun(desc)
    b = desc["bezier"]
    return rational_bezier3(*[str(c) for c in b["c"]], *[str(w) for w in b["w"]])


def _build_helix(desc):
    t = stereographic_tangent(parse_ratfun(desc["b1"]), parse_ratfun(desc["b2"]))
    return helix_from_a3(_build_a3(desc["a3"]), t, orientation=desc.get("orientation", "curvature"))


def _rvf_dump(v):
    return [_s(c) for c in v]


def _helix_dump(h):
    ax = h.axis
    return {
        "r": _rvf_dump(h.r),
        "t": _rvf_dump(h.t),
        "a1": _s(h.a1),
        "a2": _s(h.a2),
        "a3": _s(h.a3),
        "sigma": _s(h.sigma),
        "axis_direction": [int(x) for x in ax.direction],
        "cos_psi": _s(ax.cos_psi),
        "component_degrees": h.r.component_degrees(),
        "degree": h.r.degree(),
        "cusps": [_g(c) for c in h.cusps],
    }


def _curve_csv(r, speed, n, dps):
    rows = ["t,x,y,z,speed"]
    with mpmath.workdps(dps):
        for t in np.linspace(0, 1, n):
            u = mpmath.mpf(float(t))
            p = [c.eval_mp(u) for c in r]
            sp = speed.eval_mp(u) if isinstance(speed, RatFun) else mpmath.nan
            rows.append(",".join([_g(t), *(_g(x) for x in p), _g(sp)]))
    return "\n".join(rows) + "\n"


def _check(ok, what):
    if not ok:
        raise AssertionError(f"invariant violated: {what}")


# --- commands ---------------------------------------------------------------


def cmd_construct(cfg, out, dps):
    desc = cfg["curve"]
    n = cfg.get("samples", 101)
    if "b1" in desc:
        h = _build_helix(desc)
        _check(h.check(), "r' = sigma t and basis reconstruction")
        rep = {"kind": "helix", **_helix_dump(h)}
        r, speed = h.r, h.sigma
    else:
        v = [parse_ratfun(x) for x in desc["v"]]
        from .curves import RVF3

        ph = ph_curve_from_tangent(_build_a3(desc["a3"]), RVF3(*v))
        _check(ph.check(), "r' = g v")
        rep = {
            "kind": "ph",
            "r": _rvf_dump(ph.r),
            "a1": _s(ph.a1),
            "a2": _s(ph.a2),
            "a3": _s(ph.a3),
            "g": _s(ph.g),
            "component_degrees": ph.r.component_degrees(),
            "degree": ph.r.degree(),
            "cusps": [_g(c) for c in curve_cusps(ph.g)],
        }
        r, speed = ph.r, ph.g
    _dump(os.path.join(out, "curve.json"), rep)
    _atomic_write(os.path.join(out, "samples.csv"), _curve_csv(r, speed, n, dps))
    return rep


def cmd_hermite(cfg, out, dps):
    data = HermiteData(*(tuple(str(x) for x in cfg[k]) for k in ("p0", "t0", "p1", "t1")))
    shape = tuple(str(x) for x in cfg["shape"]) if "shape" in cfg else None
    sol = interpolate(
        data,
        mode=cfg.get("mode", "line"),
        shape=shape,
        allow_negative=cfg.get("allow_negative", False),
        orientation=cfg.get("orientation", "curvature"),
    )
    c0, c1, c2, c3, w1, w2 = sol.bezier
    rep = {
        "bezier": {"c": [_s(c) for c in (c0, c1, c2, c3)], "w": [_s(w1), _s(w2)]},
        "b1": _s(sol.b1),
        "b2": _s(sol.b2),
        "rotation": [list(map(int, row)) for row in sol.rotation] if sol.rotation is not None else None,
        "residuals": {k: ([_s(x) for x in v] if k != "exact_zero" else v) for k, v in sol.residuals.items()},
        "helix": _helix_dump(sol.helix),
    }
    _check(sol.residuals["exact_zero"], "endpoint residuals")
    _dump(os.path.join(out, "hermite.json"), rep)
    _atomic_write(os.path.join(out, "samples.csv"), _curve_csv(sol.helix.r, sol.helix.sigma, cfg.get("samples", 101), dps))
    return rep


def _rmf_dump(piece):
    mm = piece.minimax
    return {
        "interval": [_g(x) for x in piece.interval],
        "form": piece.form,
        "a": [_g(x) for x in (mm.q if piece.form == "cot" else mm.p)],
        "b": [_g(x) for x in (mm.p if piece.form == "cot" else mm.q)],
        "a_exact": _s(piece.a),
        "b_exact": _s(piece.b),
        "minimax_eps": _g(piece.minimax_error),
        "alternations": mm.n_alternations,
        "exact_representation": bool(mm.exact),
        "converged": bool(mm.converged),
        "rmf_condition_error": _g(piece.rmf_condition_error),
        "orthonormal": bool(piece.orthonormal),
    }


def _rmf_csv(pieces):
    rows = ["t,f2p_dot_f3"]
    for p in pieces:
        rows += [f"{_g(t)},{_g(v)}" for t, v in zip(p.samples, p.profile)]
    return "\n".join(rows) + "\n"


def cmd_rmf(cfg, out, dps):
    h = _build_helix(cfg["helix"])
    try:
        pieces = approximate_rmf(
            h, cfg["m"], cfg["k"], cfg.get("theta0", "zero"), norm=cfg.get("norm", "abs"), strict=True
        )
    except RemezStagnation as exc:
        best = exc.result
        _dump(
            os.path.join(out, "rmf.json"),
            {"status": "stagnated", "message": str(exc), "best": {"p": [_g(x) for x in best.p], "q": [_g(x) for x in best.q], "eps": _g(best.eps)}},
        )
        raise
    for p in pieces:
        _check(p.orthonormal, "exact orthonormality of the rational frame")
    rep = {"status": "ok", "m": cfg["m"], "k": cfg["k"], "theta0": cfg.get("theta0", "zero"), "pieces": [_rmf_dump(p) for p in pieces]}
    rep["minimax_eps"] = max(float(p.minimax_error) for p in pieces)
    rep["rmf_condition_error"] = max(float(p.rmf_condition_error) for p in pieces)
    _dump(os.path.join(out, "rmf.json"), rep)
    _atomic_write(os.path.join(out, "rmf_error.csv"), _rmf_csv(pieces))
    return rep


def _build_profile(desc):
    dom = tuple(str(x) for x in desc.get("domain", (0, 1)))
    kind = desc["kind"]
    if kind == "line":
        return ProfileCurve.line([str(x) for x in desc["c1"]], [str(x) for x in desc["c2"]], dom)
    if kind == "rational":
        return ProfileCurve.rational(str(desc["c1"]), str(desc["c2"]), dom)
    return ProfileCurve.polyline([[str(x) for x in p] for p in desc["points"]])


def cmd_sweep(cfg, out, dps):
    h = _build_helix(cfg["spine"])
    fr = cfg["frame"]
    if fr["kind"] == "fsf":
        frame = "fsf"
    else:
        frame = approximate_rmf(h, fr.get("m", 3), fr.get("k", 3), fr.get("theta0", "zero"), norm=fr.get("norm", "abs"))
    profile = _build_profile(cfg["profile"])
    S = sweep(h, frame, profile)
    ns, nt = cfg.get("grid", [50, 50])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        mesh = sample_mesh(S, (ns, nt), curvature=cfg.get("curvature", True), dps=dps)
    rep = mesh.k_report(cfg.get("threshold", 1e-9)) if mesh.K is not None else {}
    rep.update(
        {
            "frame": fr["kind"],
            "vertices": len(mesh.vertices),
            "quads": len(mesh.quads),
            "degenerate_quads": len(mesh.degenerate_quads),
            "warnings": sorted({f"{w.category.__name__}: {w.message}" for w in caught}),
        }
    )
    text = obj_text(mesh)
    rep["obj_sha256"] = hashlib.sha256(text.encode()).hexdigest()
    _atomic_write(os.path.join(out, "surface.obj"), text)
    if mesh.K is not None:
        _atomic_write(os.path.join(out, "curvature.csv"), curvature_csv_text(mesh))
    _dump(os.path.join(out, "report.json"), rep)
    if mesh.singular and not profile.is_zero():
        raise SingularPoint(f"{len(mesh.singular)} singular grid points")
    return rep


COMMANDS = {"construct": cmd_construct, "hermite": cmd_hermite, "rmf": cmd_rmf, "sweep": cmd_sweep}
FAIL_CODE = {"construct": EXIT_INTERP, "hermite": EXIT_INTERP, "rmf": EXIT_APPROX, "sweep": EXIT_SURFACE}


def build_parser():
    ap = argparse.ArgumentParser(prog="helixforge", description="Rational helices, approximate RMFs and sweep surfaces.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True, help="JSON job file")
    ap.add_argument("--out", required=True, help="output directory")
    ap.add_argument("--precision", type=int, default=None, help="decimal digits for high-precision evaluation")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("-v", "--verbose", action="store_true")
    ap.add_argument("--version", action="version", version=f"helixforge {__version__}")
    return ap


def run(argv=None):
    """Parse arguments, run the job and return the exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
        validate(cfg)
        if cfg["command"] != args.command:
            raise ConfigError(f"config is for '{cfg['command']}', not '{args.command}'")
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    dps = args.precision or cfg.get("precision", 50)
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    np.random.seed(seed)
    os.makedirs(args.out, exist_ok=True)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            COMMANDS[args.command](cfg, args.out, dps)
    except (ExpressionError, ValueError) as exc:
        if isinstance(exc, HelixForgeError):
            print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
            return FAIL_CODE[args.command]
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except HelixForgeError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return FAIL_CODE[args.command]
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        log.exception("unexpected failure")
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
