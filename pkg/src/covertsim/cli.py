"""Command-line front end.

    covertsim <command> --config <path> --out <path>
              [--seed <u64>] [--trials <n>] [--format csv|json]

Commands map one-to-one onto the solve problems and the standard evaluation
sweeps; every output file carries '#'-prefixed metadata lines (tool version,
command, seed, config hash) so results are reproducible byte-for-byte from
the same seed. Exit codes: 0 success, 1 verification checks failed,
2 configuration error, 3 infeasible covert constraint, 4 domain error.
"""

import argparse
import hashlib
import json
import os
import sys
import tempfile

from . import __version__, design, detection, mc
from .errors import ConfigError, CovertSimError, DomainError, InfeasibleCover
from .mc import GammaGrid, SimulationParams
from .model import SystemConfig

DEFAULT_SEED = 12345

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_DOMAIN = 4

_CONFIG_FIELDS = {
    # SystemConfig
    "M": int, "P_max": float, "sigma_b2": float, "sigma_w2": float,
    "lambda_b": float, "lambda_w": float, "epsilon": float, "h_ab2": float,
    # SimulationParams (gamma_grid flattened to scalar keys)
    "trials": int, "gamma_grid_min": float, "gamma_grid_max": float,
    "gamma_grid_points": int, "finite_N": int,
}


def load_config(path: str) -> tuple[SystemConfig, SimulationParams, str]:
    """Parse a flat `key = value` config file. Unknown keys are errors:
    a silently ignored typo in epsilon would corrupt the covertness
    guarantee. Returns (system config, simulation params, sha256 of file)."""
    with open(path, "rb") as fh:
        raw = fh.read()
    digest = hashlib.sha256(raw).hexdigest()[:16]
    values = {}
    for lineno, line in enumerate(raw.decode("utf-8").splitlines(), 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, val = text.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _CONFIG_FIELDS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _CONFIG_FIELDS[key](val)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}")
    if "M" not in values:
        raise ConfigError(f"{path}: required key 'M' missing")

    sys_kwargs = {k: v for k, v in values.items()
                  if k in ("M", "P_max", "sigma_b2", "sigma_w2",
                           "lambda_b", "lambda_w", "epsilon", "h_ab2")}
    config = SystemConfig(**sys_kwargs)

    grid_keys = [k for k in values if k.startswith("gamma_grid_")]
    grid = None
    if grid_keys:
        missing = {"gamma_grid_min", "gamma_grid_max",
                   "gamma_grid_points"} - set(grid_keys)
        if missing:
            raise ConfigError(f"{path}: incomplete gamma_grid spec, "
                              f"missing {sorted(missing)}")
        grid = GammaGrid(values["gamma_grid_min"], values["gamma_grid_max"],
                         values["gamma_grid_points"])
    params = SimulationParams(trials=values.get("trials", 1_000_000),
                              gamma_grid=grid,
                              finite_N=values.get("finite_N"))
    return config, params, digest


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _atomic_write(path: str, data: str):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".covertsim-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_output(path: str, fmt: str, meta: dict, header: list, rows: list):
    """CSV: metadata comment lines, header, then rows with floats at 12
    significant digits. JSON: single sorted-keys object."""
    if fmt == "json":
        doc = {"meta": meta, "columns": header,
               "rows": [dict(zip(header, row)) for row in rows]}
        _atomic_write(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return
    lines = [f"# covertsim {meta['version']}",
             f"# command = {meta['command']}",
             f"# seed = {meta['seed']}",
             f"# config_sha256 = {meta['config_sha256']}"]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _solution_doc(sol, config: SystemConfig, meta: dict) -> dict:
    return {
        "meta": meta,
        "inputs": {
            "M": config.M, "P_max": config.P_max,
            "sigma_b2": config.sigma_b2, "sigma_w2": config.sigma_w2,
            "lambda_b": config.lambda_b, "lambda_w": config.lambda_w,
            "epsilon": config.epsilon, "h_ab2": config.h_ab2,
        },
        "solution": {
            "pa_star": sol.P_a_star,
            "k_min": sol.K_min,
            "tau_policy": {
                "rule": "activate users whose covert-band gain to the "
                        "receiver is at or below the k-th smallest",
                "k": sol.K_min,
            },
            "gamma_star": sol.gamma_star,
            "zeta_min": sol.zeta_min,
            "r_max": sol.R_max,
            "eta_max": sol.eta_max,
            "e_eff": sol.E_eff,
            "total_power": sol.K_min * config.P_max + sol.P_a_star,
            "method_tags": sol.method_tags,
        },
    }


# ---------------------------------------------------------------------------
# command handlers: each returns (exit_code, header, rows) or writes JSON

def cmd_solve(config, params, args, meta):
    sol = design.optimize_pa_throughput(config)
    _atomic_write(args.out, json.dumps(_solution_doc(sol, config, meta),
                                       indent=2, sort_keys=True) + "\n")
    return EXIT_OK, None, None


def cmd_solve_energy(config, params, args, meta):
    sol = design.optimize_pa_energy(config)
    _atomic_write(args.out, json.dumps(_solution_doc(sol, config, meta),
                                       indent=2, sort_keys=True) + "\n")
    return EXIT_OK, None, None


def _parse_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def cmd_sweep_dep_gamma(config, params, args, meta):
    """Analytic and empirical DEP versus detection threshold."""
    if not args.pa > 0:
        raise DomainError("--pa must be strictly positive for DEP sweeps")
    header = ["K", "P_a", "gamma", "zeta_analytic", "zeta_mc", "zeta_mc_se"]
    rows = []
    for sub, k in enumerate(int(v) for v in _parse_list(args.k_values)):
        grid_spec = params.gamma_grid or mc.default_gamma_grid(k, config, points=50)
        p = SimulationParams(trials=params.trials, gamma_grid=grid_spec,
                             finite_N=params.finite_N)
        grid, ests = mc.simulate_dep_curve(k, args.pa, config, p,
                                           seed=args.seed, substream=sub)
        for g, est in zip(grid, ests):
            za = detection.dep_analytic(g, k, args.pa, config.P_max,
                                        config.sigma_w2)
            rows.append([k, args.pa, float(g), za, est.estimate,
                         est.std_error])
    return EXIT_OK, header, rows


def cmd_sweep_dep_k(config, params, args, meta):
    """Minimum DEP versus cooperator count (analytic closed form)."""
    header = ["P_a", "K", "zeta_min", "regime_valid"]
    rows = []
    for pa in _parse_list(args.pa_values):
        for k in range(1, args.k_max + 1):
            rows.append([pa, k, detection.min_dep(k, pa, config.P_max),
                         int(detection.theorem_regime_valid(k, pa, config.P_max))])
    return EXIT_OK, header, rows


def cmd_sweep_throughput_r(config, params, args, meta):
    """Throughput versus covert rate at fixed transmit power: analytic
    R * Pc next to the empirical curve (common random numbers)."""
    kk = detection.k_min(args.pa, config.P_max, config.epsilon)
    if kk > config.M:
        raise InfeasibleCover(
            f"covert constraint needs {kk} cooperators, only {config.M} users")
    if args.r_max is not None:
        r_hi = args.r_max
    else:
        try:
            r_hi = 1.5 * design.max_covert_rate(args.pa, kk, config)
        except DomainError:
            r_hi = design.numeric_rate_argmax(args.pa, kk, config)[0] * 1.5
    grid = [r_hi * (i + 1) / args.r_points for i in range(args.r_points)]
    curve = mc.simulate_throughput_curve(args.pa, kk, config, grid, params,
                                         seed=args.seed)
    header = ["R", "k_min", "eta_analytic", "eta_mc", "eta_mc_se"]
    rows = []
    for (r, est) in curve:
        pc = design.connection_probability(r, args.pa, kk, config)
        rows.append([r, kk, r * pc, est.estimate, est.std_error])
    return EXIT_OK, header, rows


def _eps_grid(args) -> list[float]:
    lo, hi, n = args.eps_range.split(":")
    lo, hi, n = float(lo), float(hi), int(n)
    if n < 2 or not hi > lo:
        raise ConfigError(f"bad --eps-range {args.eps_range!r}")
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def cmd_sweep_eta_epsilon(config, params, args, meta):
    """Peak maximum throughput versus the covertness slack."""
    header = ["epsilon", "covert_constraint", "pa_star", "k_min", "r_max",
              "eta_max", "e_eff", "rate_method"]
    rows = []
    for eps in _eps_grid(args):
        cfg = SystemConfig(M=config.M, P_max=config.P_max,
                           sigma_b2=config.sigma_b2, sigma_w2=config.sigma_w2,
                           lambda_b=config.lambda_b, lambda_w=config.lambda_w,
                           epsilon=eps, h_ab2=config.h_ab2)
        sol = design.optimize_pa_throughput(cfg)
        rows.append([eps, 1.0 - eps, sol.P_a_star, sol.K_min, sol.R_max,
                     sol.eta_max, sol.E_eff, sol.method_tags["rate"]])
    return EXIT_OK, header, rows


def cmd_sweep_pa_k_epsilon(config, params, args, meta):
    """Optimal transmit power and cooperator count versus the covertness
    slack, next to their closed-form approximations."""
    header = ["epsilon", "covert_constraint", "pa_star", "k_star",
              "pa_star_closed", "k_star_closed", "cross_point"]
    rows = []
    for eps in _eps_grid(args):
        cfg = SystemConfig(M=config.M, P_max=config.P_max,
                           sigma_b2=config.sigma_b2, sigma_w2=config.sigma_w2,
                           lambda_b=config.lambda_b, lambda_w=config.lambda_w,
                           epsilon=eps, h_ab2=config.h_ab2)
        sol = design.optimize_pa_throughput(cfg)
        rows.append([eps, 1.0 - eps, sol.P_a_star, sol.K_min,
                     design.pa_star_closed_form(cfg),
                     design.k_star_closed_form(cfg),
                     design.cross_point(cfg)])
    return EXIT_OK, header, rows


def cmd_compare_energy(config, params, args, meta):
    """Throughput-optimal versus energy-efficient design across the
    covertness slack."""
    header = ["epsilon", "pa_tp", "k_tp", "eta_tp", "total_power_tp",
              "e_eff_tp", "pa_ee", "k_ee", "eta_ee", "total_power_ee",
              "e_eff_ee"]
    rows = []
    for eps in _eps_grid(args):
        cfg = SystemConfig(M=config.M, P_max=config.P_max,
                           sigma_b2=config.sigma_b2, sigma_w2=config.sigma_w2,
                           lambda_b=config.lambda_b, lambda_w=config.lambda_w,
                           epsilon=eps, h_ab2=config.h_ab2)
        st = design.optimize_pa_throughput(cfg)
        se = design.optimize_pa_energy(cfg)
        rows.append([eps,
                     st.P_a_star, st.K_min, st.eta_max,
                     st.K_min * cfg.P_max + st.P_a_star, st.E_eff,
                     se.P_a_star, se.K_min, se.eta_max,
                     se.K_min * cfg.P_max + se.P_a_star, se.E_eff])
    return EXIT_OK, header, rows


def cmd_mc_verify(config, params, args, meta):
    """Cross-validate the closed forms against their Monte-Carlo oracles.

    Checks: DEP closed form over threshold grids, the optimal-threshold
    location by empirical argmin, and the connection probability over the
    operating range of rates. One row per comparison; exit 1 when any check
    exceeds its tolerance.
    """
    header = ["check", "K", "param", "analytic", "estimate", "std_error",
              "abs_err", "tol", "status"]
    rows = []
    sub = 0

    # closed-form DEP vs empirical DEP over a 50-point threshold grid
    for (k, pa) in [(15, 1.0), (25, 1.0), (43, 0.83)]:
        p = SimulationParams(trials=params.trials,
                             gamma_grid=mc.default_gamma_grid(k, config, 50),
                             finite_N=params.finite_N)
        grid, ests = mc.simulate_dep_curve(k, pa, config, p,
                                           seed=args.seed, substream=sub)
        sub += 1
        for g, est in zip(grid, ests):
            za = detection.dep_analytic(g, k, pa, config.P_max, config.sigma_w2)
            err = abs(za - est.estimate)
            tol = max(0.01, 4 * est.std_error)
            rows.append(["dep_closed_form_vs_mc", k, float(g), za,
                         est.estimate, est.std_error, err, tol,
                         "pass" if err <= tol else "fail"])

    # optimal threshold by simulation: argmin within one grid step
    for k in (15, 25):
        p = SimulationParams(trials=params.trials,
                             gamma_grid=mc.default_gamma_grid(k, config, 200),
                             finite_N=params.finite_N)
        ghat, zhat = mc.simulate_min_dep(k, config.P_max, config, p,
                                         seed=args.seed, substream=sub)
        sub += 1
        gstar = detection.optimal_threshold(k, config.P_max, config.sigma_w2)
        step = (p.gamma_grid.max - p.gamma_grid.min) / (p.gamma_grid.points - 1)
        err = abs(ghat - gstar)
        rows.append(["optimal_threshold_vs_mc_argmin", k, ghat, gstar, ghat,
                     0.0, err, step, "pass" if err <= step + 1e-12 else "fail"])

    # connection probability vs MC across the operating range of rates
    for (kk, pa) in [(43, 0.83), (121, 0.83)]:
        rmax = design.max_covert_rate(pa, kk, config)
        fracs = [0.15, 0.3, 0.45, 0.6, 0.75, 0.9, 0.95]
        grid = [f * rmax for f in fracs]
        curve = mc.simulate_throughput_curve(pa, kk, config, grid, params,
                                             seed=args.seed, substream=sub)
        sub += 1
        for (r, est) in curve:
            pc = design.connection_probability(r, pa, kk, config)
            pc_hat = est.estimate / r
            se = est.std_error / r
            err = abs(pc - pc_hat)
            tol = max(0.01, 4 * se)
            rows.append(["connection_prob_vs_mc", kk, r, pc, pc_hat, se,
                         err, tol, "pass" if err <= tol else "fail"])

    failed = sum(1 for row in rows if row[-1] == "fail")
    return (EXIT_CHECK_FAILED if failed else EXIT_OK), header, rows


COMMANDS = {
    "solve": cmd_solve,
    "solve-energy": cmd_solve_energy,
    "sweep-dep-gamma": cmd_sweep_dep_gamma,
    "sweep-dep-k": cmd_sweep_dep_k,
    "sweep-throughput-r": cmd_sweep_throughput_r,
    "sweep-eta-epsilon": cmd_sweep_eta_epsilon,
    "sweep-pa-k-epsilon": cmd_sweep_pa_k_epsilon,
    "compare-energy": cmd_compare_energy,
    "mc-verify": cmd_mc_verify,
}

_JSON_DEFAULT = {"solve", "solve-energy"}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="covertsim",
        description="covert uplink design toolkit: solve operating points and "
                    "reproduce the standard evaluation sweeps")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--config", required=True, help="key = value config file")
        p.add_argument("--out", required=True, help="output file path")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                       help="master 64-bit seed (default %(default)s)")
        p.add_argument("--trials", type=int, default=None,
                       help="override Monte-Carlo trial count")
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="output format (default: json for solve commands, "
                            "csv for sweeps)")
        if name == "sweep-dep-gamma":
            p.add_argument("--pa", type=float, default=None,
                           help="covert transmit power (default P_max)")
            p.add_argument("--k-values", default="15,25",
                           help="comma-separated cooperator counts")
        if name == "sweep-dep-k":
            p.add_argument("--pa-values", default="0.67,0.83",
                           help="comma-separated covert transmit powers")
            p.add_argument("--k-max", type=int, default=100)
        if name == "sweep-throughput-r":
            p.add_argument("--pa", type=float, default=0.83,
                           help="covert transmit power")
            p.add_argument("--r-points", type=int, default=60)
            p.add_argument("--r-max", type=float, default=None,
                           help="upper end of the rate grid "
                                "(default 1.5x the closed-form optimum)")
        if name in ("sweep-eta-epsilon", "sweep-pa-k-epsilon",
                    "compare-energy"):
            p.add_argument("--eps-range", default="0.02:0.12:41",
                           help="lo:hi:npoints grid for the covertness slack")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config, params, digest = load_config(args.config)
        if args.trials is not None:
            params = SimulationParams(trials=args.trials,
                                      gamma_grid=params.gamma_grid,
                                      finite_N=params.finite_N)
        if getattr(args, "pa", None) is None and hasattr(args, "pa"):
            args.pa = config.P_max
        meta = {"version": __version__, "command": args.command,
                "seed": args.seed, "config_sha256": digest}
        fmt = args.format or ("json" if args.command in _JSON_DEFAULT else "csv")
        code, header, rows = COMMANDS[args.command](config, params, args, meta)
        if header is not None:
            write_output(args.out, fmt, meta, header, rows)
        return code
    except ConfigError as exc:
        print(f"covertsim: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleCover as exc:
        print(f"covertsim: infeasible covert constraint: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DomainError, CovertSimError) as exc:
        print(f"covertsim: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
