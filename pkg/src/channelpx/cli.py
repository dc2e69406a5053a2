"""Command-line front end: ``channelpx price | curve | verify``.

Configuration comes from an optional JSON file (``--config``) overridden by
flags. Output is JSON (or CSV) on stdout; errors go to stderr as JSON.

Exit codes: 0 success, 1 config/parse error, 2 domain error, 3 failed check.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any

import numpy as np

from . import barrier_pricer as bp
from . import channel_model as cm
from . import channel_pricer as cp
from .errors import ChannelpxError
from .oracles import binomial, fokker_planck, montecarlo, pde, quadrature

CONFIG_SCHEMA = "channelpx.config.v1"
RESULT_SCHEMA = "channelpx.result.v1"

CHANNEL_KINDS = ("call", "put")
BARRIER_KINDS = ("call", "put", "dko_call", "dko_put", "one_touch_upper", "one_touch_lower")
SUITES = ("density", "martingale", "parity", "oracle_channel", "oracle_barrier", "arbitrage_demo")

COMMON_DEFAULTS = {
    "kind": "call",
    "spot": 100.0,
    "strike": 110.0,
    "tau": 1.0,
    "seed": 20200525,
    "paths": 200_000,
    "steps": 256,
    "bridge": True,
}
CHANNEL_DEFAULTS = {"center_a": 100.0, "half_width_b": 20.0, "nu": 1.0, "sigma": 0.2, "x_star": 0.0}
BARRIER_DEFAULTS = {"lower": 80.0, "upper": 120.0, "rate": 0.02, "carry": None, "sigma": 0.25}
CURVE_DEFAULTS = {"sweep": "tau", "start": None, "stop": None, "points": 21}
ARB_DEFAULTS = {"arb_s_now": 80.0, "arb_s_up": 81.0, "arb_rate": 0.05, "arb_dt": 0.01}

FLOAT_KEYS = {
    "spot", "strike", "tau", "t", "T", "center_a", "half_width_b", "nu", "sigma", "x_star",
    "lower", "upper", "rate", "carry", "start", "stop",
    "arb_s_now", "arb_s_up", "arb_rate", "arb_dt",
}
INT_KEYS = {"seed", "paths", "steps", "points"}
STR_KEYS = {"schema", "model", "kind", "format", "sweep", "suite"}
BOOL_KEYS = {"bridge"}
ALL_KEYS = FLOAT_KEYS | INT_KEYS | STR_KEYS | BOOL_KEYS


class ConfigError(Exception):
    """Malformed configuration; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


# config handling ---------------------------------------------------------------


def _coerce(key: str, value: Any) -> Any:
    if value is None:
        return None
    try:
        if key in FLOAT_KEYS:
            if isinstance(value, bool):
                raise TypeError
            out = float(value)
            if not math.isfinite(out):
                raise ValueError
            return out
        if key in INT_KEYS:
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise TypeError
            return int(value)
        if key in BOOL_KEYS:
            if isinstance(value, bool):
                return value
            if isinstance(value, str) and value.lower() in ("true", "false"):
                return value.lower() == "true"
            raise TypeError
        if key in STR_KEYS:
            if not isinstance(value, str):
                raise TypeError
            return value
    except (TypeError, ValueError):
        raise ConfigError(f"bad value for {key!r}: {value!r}") from None
    raise ConfigError(f"unknown config key {key!r}")


def resolve_config(raw: dict[str, Any], command: str) -> dict[str, Any]:
    """Validate keys, apply defaults and return the resolved configuration.

    Only keys relevant to the model and command survive, so the output
    reparses to the same run.
    """
    unknown = set(raw) - ALL_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    schema = raw.get("schema", CONFIG_SCHEMA)
    if schema != CONFIG_SCHEMA:
        raise ConfigError(f"unsupported config schema {schema!r}")
    cfg = {k: _coerce(k, v) for k, v in raw.items() if v is not None}

    model = cfg.get("model", "channel")
    if model not in ("channel", "barrier"):
        raise ConfigError(f"model must be 'channel' or 'barrier', got {model!r}")

    if "t" in cfg or "T" in cfg:
        if "t" not in cfg or "T" not in cfg:
            raise ConfigError("valuation time 't' and maturity 'T' must be given together")
        if "tau" in cfg:
            raise ConfigError("give either 'tau' or the pair ('t', 'T'), not both")
        cfg["tau"] = cfg.pop("T") - cfg.pop("t")

    out: dict[str, Any] = {"schema": CONFIG_SCHEMA, "model": model}
    model_defaults = CHANNEL_DEFAULTS if model == "channel" else BARRIER_DEFAULTS
    for key, default in {**COMMON_DEFAULTS, **model_defaults}.items():
        out[key] = cfg.get(key, default)
    if model == "barrier" and out["carry"] is None:
        out["carry"] = out["rate"]

    kinds = CHANNEL_KINDS if model == "channel" else BARRIER_KINDS
    if out["kind"] not in kinds:
        raise ConfigError(f"kind for model {model!r} must be one of {kinds}, got {out['kind']!r}")
    if out["paths"] < 2 or out["steps"] < 1:
        raise ConfigError("paths must be >= 2 and steps >= 1")
    if not 0 <= out["seed"] < 2**64:
        raise ConfigError("seed must be a 64-bit unsigned integer")

    fmt_default = "csv" if command == "curve" else "json"
    out["format"] = cfg.get("format", fmt_default)
    if out["format"] not in ("json", "csv"):
        raise ConfigError(f"format must be 'json' or 'csv', got {out['format']!r}")

    if command == "curve":
        for key, default in CURVE_DEFAULTS.items():
            out[key] = cfg.get(key, default)
        if out["sweep"] not in ("spot", "strike", "tau"):
            raise ConfigError(f"sweep must be spot, strike or tau, got {out['sweep']!r}")
        if out["points"] < 1:
            raise ConfigError("points must be >= 1")
        _default_sweep_range(out)
    if command == "verify":
        out["suite"] = cfg.get("suite", "density")
        if out["suite"] not in SUITES:
            raise ConfigError(f"suite must be one of {SUITES}, got {out['suite']!r}")
        if out["suite"] == "arbitrage_demo":
            for key, default in ARB_DEFAULTS.items():
                out[key] = cfg.get(key, default)
    return out


def _default_sweep_range(cfg: dict[str, Any]) -> None:
    if cfg["start"] is not None and cfg["stop"] is not None:
        return
    sweep = cfg["sweep"]
    if sweep == "tau":
        if cfg["model"] == "channel":
            # long enough to show the saturation at 400 / (sigma nu)^2
            lo, hi = 0.01, 400.0 / (cfg["sigma"] * cfg["nu"]) ** 2
        else:
            lo, hi = 0.01, 5.0
    elif cfg["model"] == "channel":
        edge_lo = cfg["center_a"] - cfg["half_width_b"]
        edge_hi = cfg["center_a"] + cfg["half_width_b"]
        pad = 1e-3 * (edge_hi - edge_lo)
        lo, hi = edge_lo + pad, edge_hi - pad
    else:
        lo, hi = cfg["lower"], cfg["upper"]
        if sweep == "strike":
            pad = 1e-3 * (hi - lo)
            lo, hi = lo + pad, hi - pad
    cfg["start"] = lo if cfg["start"] is None else cfg["start"]
    cfg["stop"] = hi if cfg["stop"] is None else cfg["stop"]


def channel_params(cfg: dict[str, Any]) -> cm.ChannelParams:
    return cm.ChannelParams(cfg["center_a"], cfg["half_width_b"], cfg["nu"], cfg["sigma"], cfg["x_star"])


def barrier_market(cfg: dict[str, Any]) -> bp.BarrierMarket:
    return bp.BarrierMarket(cfg["spot"], cfg["sigma"], cfg["rate"], cfg["carry"], cfg["lower"], cfg["upper"])


def mc_config(cfg: dict[str, Any]) -> montecarlo.McConfig:
    return montecarlo.McConfig(cfg["paths"], cfg["steps"], cfg["seed"], cfg["bridge"])


# pricing ---------------------------------------------------------------------


def price_once(cfg: dict[str, Any]):
    """Dispatch one pricing call on a resolved config."""
    if cfg["model"] == "channel":
        spec = cp.OptionSpec(cfg["strike"], cfg["tau"], cfg["kind"])
        return cp.price(cfg["spot"], spec, channel_params(cfg))
    mkt = barrier_market(cfg)
    K, tau = cfg["strike"], cfg["tau"]
    kind = cfg["kind"]
    if kind == "call":
        return bp.channel_call(mkt, K, tau)
    if kind == "put":
        return bp.channel_put(mkt, K, tau)
    if kind in ("dko_call", "dko_put"):
        return getattr(bp, kind)(mkt, K, tau)
    return getattr(bp, kind)(mkt, tau)


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(doc: dict[str, Any]) -> str:
    # python floats serialise as shortest round-trip decimals; key order is insertion order
    return json.dumps(_json_safe(doc), indent=2, allow_nan=False) + "\n"


def cmd_price(cfg: dict[str, Any]) -> tuple[int, str]:
    res = price_once(cfg)
    if cfg["format"] == "csv":
        return 0, _csv([["model", "kind", "price", "method"], [cfg["model"], cfg["kind"], repr(res.price), res.method]])
    doc = {
        "schema": RESULT_SCHEMA,
        "command": "price",
        "status": "ok",
        "model": cfg["model"],
        "price": res.price,
        "method": res.method,
        "inputs": cfg,
        "diagnostics": res.diag,
    }
    return 0, dumps(doc)


def sweep_values(cfg: dict[str, Any]) -> list[float]:
    n = cfg["points"]
    if n == 1:
        return [cfg["start"]]
    if cfg["sweep"] == "tau" and cfg["start"] > 0:
        return [float(v) for v in np.geomspace(cfg["start"], cfg["stop"], n)]
    return [float(v) for v in np.linspace(cfg["start"], cfg["stop"], n)]


def cmd_curve(cfg: dict[str, Any]) -> tuple[int, str]:
    rows = []
    for v in sweep_values(cfg):
        point = dict(cfg, **{cfg["sweep"]: v})
        res = price_once(point)
        rows.append((v, res.price, res.method))
    if cfg["format"] == "json":
        doc = {
            "schema": RESULT_SCHEMA,
            "command": "curve",
            "status": "ok",
            "model": cfg["model"],
            "sweep": cfg["sweep"],
            "rows": [{"sweep_var": v, "price": p, "method": m} for v, p, m in rows],
            "inputs": cfg,
        }
        return 0, dumps(doc)
    return 0, _csv([["sweep_var", "price", "method"]] + [[repr(v), repr(p), m] for v, p, m in rows])


def _csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


# verification suites ----------------------------------------------------------


class _Report:
    def __init__(self):
        self.checks: list[dict[str, Any]] = []
        self.info: list[dict[str, Any]] = []

    def check(self, name: str, value: float, tolerance: float, passed: bool, **extra):
        self.checks.append({"name": name, "value": value, "tolerance": tolerance, "passed": bool(passed), **extra})

    def note(self, name: str, value: float, **extra):
        self.info.append({"name": name, "value": value, **extra})


def _suite_density(cfg, rep: _Report):
    p = channel_params(cfg)
    worst_norm = 0.0
    worst_mix = 0.0
    for x0 in np.linspace(-1.5, 1.5, 4) / p.nu + p.x_star:
        for tau in (0.1, 0.5, 1.0, 2.0, 5.0):
            total = quadrature.expectation(lambda x: 1.0, x0, tau, p)
            worst_norm = max(worst_norm, abs(total - 1.0))
            xs = np.linspace(x0 - 3.0, x0 + 3.0, 201)
            d = cm.density(xs, x0, tau, p)
            keep = d > 1e-250  # relative error is meaningless once the density underflows
            rel = np.abs(d - cm.mixture_density(xs, x0, tau, p))[keep] / d[keep]
            worst_mix = max(worst_mix, float(np.max(rel)))
    rep.check("density_normalization_max_error", worst_norm, 1e-8, worst_norm < 1e-8)
    rep.check("mixture_identity_max_rel_error", worst_mix, 1e-12, worst_mix < 1e-12)
    r1 = fokker_planck.fp_residual(p, (400, 400))
    hx, ht = 2e-3 * p.sigma * math.sqrt(0.1), 1e-3 * 0.1
    r2 = fokker_planck.fp_residual(p, (400, 400), steps=(hx / 2, ht / 2))
    rep.check("fokker_planck_max_residual", r1, 1e-4, r1 < 1e-4)
    rep.check("fokker_planck_refinement_ratio", r1 / r2, 0.5, 3.5 <= r1 / r2 <= 4.5, expected=4.0)


def _suite_martingale(cfg, rep: _Report):
    p = channel_params(cfg)
    worst = 0.0
    for x0 in np.linspace(-1.5, 1.5, 4) / p.nu + p.x_star:
        for tau in (0.1, 0.5, 1.0, 2.0, 5.0):
            S_t = cm.s_of_x(x0, p)
            mean = quadrature.expectation(lambda x: float(cm.s_of_x(x, p)), x0, tau, p)
            worst = max(worst, abs(mean - S_t) / S_t)
    rep.check("bounded_martingale_max_rel_error", worst, 1e-8, worst < 1e-8)
    x0 = cm.x_of_s(cfg["spot"], p)
    tau = cfg["tau"]
    for sign in (1, -1):
        w0 = cm.exp_martingale(1.0, sign, x0, 0.0, p)
        wt = quadrature.expectation(lambda x: cm.exp_martingale(1.0, sign, x, tau, p), x0, tau, p)
        err = abs(wt - w0) / w0
        rep.check(f"exp_martingale_sign{sign:+d}_rel_error", err, 1e-8, err < 1e-8)
    est = montecarlo.mc_channel(cfg["spot"], cp.OptionSpec(cfg["strike"], tau), p, mc_config(cfg))
    z = abs(est.extra["price_mean"] - cfg["spot"]) / est.extra["price_mean_std_error"]
    rep.check("mc_price_mean_z_score", z, 3.0, z < 3.0, paths=est.paths_used)


def _suite_parity(cfg, rep: _Report):
    K, tau, S = cfg["strike"], cfg["tau"], cfg["spot"]
    if cfg["model"] == "channel":
        p = channel_params(cfg)
        vc = cp.call_price(S, cp.OptionSpec(K, tau, "call"), p).price
        vp = cp.put_price(S, cp.OptionSpec(K, tau, "put"), p).price
        gap = abs(vc - vp - S + K)
        rep.check("closed_form_parity_gap", gap, 1e-10, gap < 1e-10)
        qc = quadrature.quad_price(S, cp.OptionSpec(K, tau, "call"), p).price
        qp = quadrature.quad_price(S, cp.OptionSpec(K, tau, "put"), p).price
        qgap = abs(qc - qp - S + K)
        rep.check("quadrature_parity_gap", qgap, 1e-10, qgap < 1e-10)
        return
    # reflecting boundaries carry arbitrage; parity is reported, never asserted
    mkt = barrier_market(cfg)
    vc = bp.channel_call(mkt, K, tau).price
    vp = bp.channel_put(mkt, K, tau).price
    rep.note("channel_parity_gap", vc - vp - (S * math.exp((mkt.b - mkt.r) * tau) - K * math.exp(-mkt.r * tau)))


def _suite_oracle_channel(cfg, rep: _Report):
    p = channel_params(cfg)
    spec = cp.OptionSpec(cfg["strike"], cfg["tau"], cfg["kind"])
    closed = cp.price(cfg["spot"], spec, p).price
    quad = quadrature.quad_price(cfg["spot"], spec, p).price
    rel = abs(closed - quad) / quad
    rep.check("closed_form_vs_quadrature_rel", rel, 1e-8, rel < 1e-8, closed_form=closed, quadrature=quad)
    cosh_form = cp.price(cfg["spot"], spec, p, form="cosh").price
    rel2 = abs(closed - cosh_form) / abs(closed)
    rep.check("edge_form_vs_cosh_form_rel", rel2, 1e-12, rel2 < 1e-12)
    est = montecarlo.mc_channel(cfg["spot"], spec, p, mc_config(cfg))
    z = abs(est.value - closed) / est.std_error
    rep.check("closed_form_vs_mc_z_score", z, 3.0, z < 3.0, mc=est.value, std_error=est.std_error)


def _suite_oracle_barrier(cfg, rep: _Report):
    mkt = barrier_market(cfg)
    K, tau = cfg["strike"], cfg["tau"]
    series = {
        "dko_call": bp.dko_call(mkt, K, tau).price,
        "dko_put": bp.dko_put(mkt, K, tau).price,
        "one_touch_upper": bp.one_touch_upper(mkt, tau).price,
        "one_touch_lower": bp.one_touch_lower(mkt, tau).price,
    }
    problems = {
        "dko_call": pde.BoundaryValueProblem.dko_call(K),
        "dko_put": pde.BoundaryValueProblem.dko_put(K),
        "one_touch_upper": pde.BoundaryValueProblem.one_touch_upper(),
        "one_touch_lower": pde.BoundaryValueProblem.one_touch_lower(),
    }
    for name, prob in problems.items():
        v = pde.pde_solve(prob, mkt, tau, (2000, 2000)).at(mkt.spot)
        err = abs(series[name] - v)
        rep.check(f"{name}_series_vs_pde_abs", err, 1e-4, err < 1e-4, series=series[name], pde=v)
    paths = montecarlo.simulate_barrier(mkt, tau, mc_config(cfg))
    ests = montecarlo.barrier_estimates(paths, mkt, K, tuple(series))
    for name, est in ests.items():
        z = abs(est.value - series[name]) / est.std_error if est.std_error > 0 else 0.0
        rep.check(f"{name}_series_vs_mc_z_score", z, 3.0, z < 3.0, mc=est.value, std_error=est.std_error)
    up, lo, exp_ = paths.hit_stats
    rep.note("hit_stats", None, upper=up, lower=lo, expiry=exp_)


def _suite_arbitrage(cfg, rep: _Report):
    s_now, s_up, r, dt = cfg["arb_s_now"], cfg["arb_s_up"], cfg["arb_rate"], cfg["arb_dt"]
    profit = binomial.detect_boundary_arbitrage(s_now, s_up, r, dt)
    rep.check(
        "reflecting_lower_boundary_profit", profit, 0.0, profit > 0.0,
        verdict="ARBITRAGE" if profit > 0.0 else "NO_ARBITRAGE",
    )
    # interior node: a genuine down branch restores q in (0, 1)
    growth = math.exp(r * dt) * s_now
    step = abs(s_up - s_now) or 1.0
    up_i, down_i = growth + step, growth - step
    f_now, q, arb = binomial.binomial_claim_price(s_now, up_i, down_i, up_i, down_i, r, dt)
    rep.check("interior_node_q", q, 0.0, 0.0 < q < 1.0 and not arb)
    rep.check("interior_node_self_pricing", abs(f_now - s_now), 1e-12, abs(f_now - s_now) < 1e-12)
    # boundary node: the down branch collapses onto the grown spot
    if s_up > growth:
        _, q_b, arb_b = binomial.binomial_claim_price(s_now, s_up, growth, 1.0, 0.0, r, dt)
    else:
        # the up move no longer beats the bond; there is nothing to flag
        q_b, arb_b = math.nan, False
    rep.check("boundary_node_flagged", q_b, 0.0, arb_b, verdict="ARBITRAGE" if arb_b else "NO_ARBITRAGE")


_SUITE_FNS = {
    "density": _suite_density,
    "martingale": _suite_martingale,
    "parity": _suite_parity,
    "oracle_channel": _suite_oracle_channel,
    "oracle_barrier": _suite_oracle_barrier,
    "arbitrage_demo": _suite_arbitrage,
}
_CHANNEL_ONLY = {"density", "martingale", "oracle_channel"}


def cmd_verify(cfg: dict[str, Any]) -> tuple[int, str]:
    suite = cfg["suite"]
    if suite in _CHANNEL_ONLY and cfg["model"] != "channel":
        raise ConfigError(f"suite {suite!r} needs model 'channel'")
    if suite == "oracle_barrier" and cfg["model"] != "barrier":
        raise ConfigError("suite 'oracle_barrier' needs model 'barrier'")
    rep = _Report()
    _SUITE_FNS[suite](cfg, rep)
    passed = all(c["passed"] for c in rep.checks)
    doc = {
        "schema": RESULT_SCHEMA,
        "command": "verify",
        "status": "ok" if passed else "failed",
        "model": cfg["model"],
        "suite": suite,
        "passed": passed,
        "checks": rep.checks,
        "diagnostics": rep.info,
        "inputs": cfg,
    }
    return (0 if passed else 3), dumps(doc)


# entry point -----------------------------------------------------------------

_FLAG_KEYS = {
    "--model": ("channel (unattainable edges) or barrier (reflecting edges)", "model", str),
    "--kind": ("call, put; barrier model also dko_call, dko_put, one_touch_upper, one_touch_lower", "kind", str),
    "--spot": ("current price", "spot", float),
    "--strike": ("strike price", "strike", float),
    "--tau": ("time to maturity in years", "tau", float),
    "--t": ("valuation time (use with --T instead of --tau)", "t", float),
    "--T": ("maturity time (use with --t instead of --tau)", "T", float),
    "--lower": ("lower barrier (barrier model)", "lower", float),
    "--upper": ("upper barrier (barrier model)", "upper", float),
    "--rate": ("risk-free rate (barrier model)", "rate", float),
    "--carry": ("cost of carry; defaults to the rate (barrier model)", "carry", float),
    "--sigma": ("volatility", "sigma", float),
    "--nu": ("channel steepness (channel model)", "nu", float),
    "--center-a": ("channel centre A (channel model)", "center_a", float),
    "--half-width-b": ("channel half-width B (channel model)", "half_width_b", float),
    "--x-star": ("centre of the tanh profile in x (channel model)", "x_star", float),
    "--seed": ("Monte Carlo seed (uint64)", "seed", int),
    "--paths": ("Monte Carlo path count", "paths", int),
    "--steps": ("Monte Carlo steps per unit time", "steps", int),
    "--bridge": ("Brownian-bridge barrier correction: true or false", "bridge", str),
    "--format": ("json or csv", "format", str),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="channelpx", description="Option pricing in price channels.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("price", "curve", "verify"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON config file; flags override its values")
        for flag, (text, key, typ) in _FLAG_KEYS.items():
            sp.add_argument(flag, dest=key, type=typ, default=None, help=text)
        if name == "curve":
            sp.add_argument("--sweep", dest="sweep", choices=("spot", "strike", "tau"), default=None,
                            help="variable to sweep (default tau)")
            sp.add_argument("--start", dest="start", type=float, default=None, help="first sweep value")
            sp.add_argument("--stop", dest="stop", type=float, default=None, help="last sweep value")
            sp.add_argument("--points", dest="points", type=int, default=None, help="number of sweep points")
        if name == "verify":
            sp.add_argument("--suite", dest="suite", choices=SUITES, default=None,
                            help="verification suite (default density)")
            for key in ARB_DEFAULTS:
                sp.add_argument("--" + key.replace("_", "-"), dest=key, type=float, default=None)
    return parser


def load_config(args: argparse.Namespace) -> dict[str, Any]:
    raw: dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        raw[key] = value
    return resolve_config(raw, args.command)


def _error(code: str, message: str) -> str:
    doc = {"schema": RESULT_SCHEMA, "status": "error", "error": {"code": code, "message": message}}
    return json.dumps(doc) + "\n"


def run(argv: list[str] | None = None) -> tuple[int, str, str]:
    """Run the CLI and return (exit code, stdout text, stderr text)."""
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args)
        fn = {"price": cmd_price, "curve": cmd_curve, "verify": cmd_verify}[args.command]
        code, out = fn(cfg)
        return code, out, ""
    except ConfigError as exc:
        return 1, "", _error("config_error", str(exc))
    except ChannelpxError as exc:
        return 2, "", _error(exc.code, str(exc))


def main(argv: list[str] | None = None) -> int:
    try:
        code, out, err = run(argv)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
