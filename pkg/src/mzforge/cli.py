"""Command line entry point: ``mzforge <subcommand> [options]``.

Exit codes: 0 on success, 1 when a verdict fails, 2 on usage or config errors.
"""

from __future__ import annotations

import argparse
import inspect
import json
import math
import sys

import numpy as np

from . import report
from .certifier import WeightPolicy, sharp_bounds, sweep
from .config import ExperimentConfig, Tolerances, active_tolerances
from .cpoly import Polynomial, SpaceKind, random_polynomial
from .families import (
    RECIPES,
    RadiiPolicy,
    contraction_iterate,
    example27,
    example27_alpha,
    lift_to_annulus,
    make_family,
    torus_equispaced,
)
from .geometry import PointFamily, in_boundary_annulus
from .kernels import kernel_full_diag, kernel_trunc
from .lemmas import CHECKS

SUBCOMMANDS = ["kernel-profile", "gen", "certify", "sweep", "verify-lemma", "example27", "contract"]

# recipe parameters that may be given as flags
RECIPE_FLAGS = {
    "oversample": float, "jitter": float, "radii": str, "s": float,
    "angular_factor": float, "r_max": float, "alpha_mode": str, "alpha": float,
}


class UsageError(Exception):
    pass


def _n_list(text: str) -> list[int]:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty degree list")
    return out


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON experiment config; flags override its fields")
    p.add_argument("--tolerance", action="append", default=[], metavar="NAME=VALUE",
                   help=f"override a tolerance ({', '.join(Tolerances.names())})")


def _recipe_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--recipe", help=f"family recipe ({', '.join(RECIPES)})")
    p.add_argument("--seed", type=int)
    p.add_argument("--gamma", type=float)
    for name, typ in RECIPE_FLAGS.items():
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mzforge", description="Construct and certify polynomial sampling families.")
    sub = ap.add_subparsers(dest="command", metavar="SUBCOMMAND")

    p = sub.add_parser("kernel-profile", help="radial profile of k_n(z,z) and k(z,z)")
    _common(p)
    p.add_argument("--space")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=float, help="extend Hardy profiles to radius (1-gamma/n)^-1")
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--angle", type=float, default=0.0)
    p.add_argument("--out")

    p = sub.add_parser("gen", help="generate a point family")
    _common(p)
    _recipe_flags(p)
    p.add_argument("--n", type=int)
    p.add_argument("--out")

    p = sub.add_parser("certify", help="sharp sampling constants of a family")
    _common(p)
    p.add_argument("--family", required=True)
    p.add_argument("--space")
    p.add_argument("--policy")
    p.add_argument("--n", type=int)
    p.add_argument("--witnesses", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("sweep", help="sharp constants over a degree list")
    _common(p)
    _recipe_flags(p)
    p.add_argument("--space")
    p.add_argument("--policy")
    p.add_argument("--n-list", type=_n_list)
    p.add_argument("--spread-factor", type=float)
    p.add_argument("--floor", type=float)
    p.add_argument("--out-csv")
    p.add_argument("--out-json")

    p = sub.add_parser("verify-lemma", help=f"run a named check ({', '.join(CHECKS)})")
    _common(p)
    p.add_argument("name")
    for flag, typ in [("gamma", float), ("n", int), ("grid", int), ("trials", int), ("seed", int),
                      ("gamma0", float), ("eps", float), ("s", float), ("angular-factor", float),
                      ("levels", int), ("degree-max", int), ("samples", int), ("probes", int)]:
        p.add_argument("--" + flag, type=typ)
    p.add_argument("--n-list", type=_n_list)
    p.add_argument("--out")

    p = sub.add_parser("example27", help="ring of n points plus one interior point")
    _common(p)
    p.add_argument("--gamma", type=float)
    p.add_argument("--n-list", type=_n_list)
    p.add_argument("--alpha-mode", choices=["interior", "zero", "value"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--space")
    p.add_argument("--policy")
    p.add_argument("--out-csv")

    p = sub.add_parser("contract", help="iterate the root-reflection contraction")
    _common(p)
    p.add_argument("--family", help="family JSON (default: n+1 torus points with two-sided random radii)")
    p.add_argument("--poly", help="polynomial JSON (default: random with roots on both sides)")
    p.add_argument("--n", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--levels", type=int, default=20)
    p.add_argument("--roots-spread", type=float, default=3.0)
    p.add_argument("--out-csv")
    return ap


# ---------------------------------------------------------------------------
# helpers


def _load_config(args) -> ExperimentConfig:
    if not getattr(args, "config", None):
        return ExperimentConfig()
    try:
        return ExperimentConfig.load(args.config)
    except (OSError, json.JSONDecodeError, TypeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from None


def _tolerances(args, cfg: ExperimentConfig) -> Tolerances:
    return Tolerances().override(cfg.tolerances).override(args.tolerance)


def _pick(flag, cfg_value, default=None):
    if flag is not None:
        return flag
    if cfg_value not in (None, [], {}):
        return cfg_value
    return default


def _recipe_params(args, cfg: ExperimentConfig) -> tuple[str, dict]:
    recipe = _pick(args.recipe, cfg.recipe if args.config else None)
    if recipe is None:
        raise UsageError(f"--recipe is required; valid recipes: {', '.join(RECIPES)}")
    if recipe not in RECIPES:
        raise UsageError(f"unknown recipe {recipe!r}; valid recipes: {', '.join(RECIPES)}")
    params = dict(cfg.params) if args.config else {}
    for name in RECIPE_FLAGS:
        v = getattr(args, name, None)
        if v is not None:
            params[name] = v
    gamma = _pick(args.gamma, cfg.gamma)
    if gamma is not None:
        params["gamma"] = gamma
    seed = _pick(args.seed, cfg.seed if args.config else None)
    accepted = inspect.signature(RECIPES[recipe]).parameters
    if seed is not None and "seed" in accepted:
        params["seed"] = seed
    unknown = set(params) - set(accepted)
    if unknown:
        raise UsageError(f"recipe {recipe!r} does not take {', '.join(sorted(unknown))}; "
                         f"it takes {', '.join(k for k in accepted if k != 'n')}")
    return recipe, params


def _policy(value) -> WeightPolicy:
    try:
        return WeightPolicy(value)
    except ValueError:
        raise UsageError(f"unknown weight policy {value!r}; valid policies: "
                         + ", ".join(p.value for p in WeightPolicy)) from None


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_kernel_profile(args, cfg, tol) -> int:
    space = SpaceKind.parse(_pick(args.space, cfg.space if args.config else None, "bergman"))
    n = args.n
    if n < 0 or args.points < 2:
        raise UsageError("need n >= 0 and at least 2 points")
    gamma = _pick(args.gamma, cfg.gamma)
    r_max = 1.0
    if space is SpaceKind.HARDY and gamma is not None:
        r_max = 1 / (1 - gamma / n)
    r = np.linspace(0, r_max, args.points)
    z = r * np.exp(1j * args.angle)
    kn, direct = kernel_trunc(space, n, z, z, return_regime=True)
    rows = []
    for ri, zi, ki, di in zip(r, z, np.real(kn), direct):
        full = float(kernel_full_diag(space, zi)) if ri < 1 else None
        rows.append({"r": float(ri), "k_n": float(ki), "k": "" if full is None else full,
                     "ratio": "" if full is None else float(ki) / full,
                     "regime": "direct_sum" if di else "closed_form"})
    header = {"space": space.value, "n": n, "angle": args.angle, "tolerances": tol.to_dict()}
    _emit(report.to_csv(rows, ["r", "k_n", "k", "ratio", "regime"], header), args.out)
    return 0


def cmd_gen(args, cfg, tol) -> int:
    recipe, params = _recipe_params(args, cfg)
    n = _pick(args.n, cfg.n_list[0] if cfg.n_list else None)
    if n is None:
        raise UsageError("--n is required")
    try:
        fam = make_family(recipe, n, **params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    fam.provenance["tolerances"] = tol.to_dict()
    out = _pick(args.out, cfg.outputs.get("family"))
    _emit(report.to_json(fam.to_dict()), out)
    if out:
        print(f"wrote {len(fam)} points ({recipe}, n={n}) to {out}")
    return 0


def cmd_certify(args, cfg, tol) -> int:
    try:
        fam = PointFamily.load(args.family)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot read family {args.family}: {exc}") from None
    space = _pick(args.space, cfg.space if args.config else None, "bergman")
    policy = _policy(_pick(args.policy, cfg.policy if args.config else None, "kernel-diag"))
    n = _pick(args.n, fam.n)
    if n is None:
        raise UsageError("degree unknown: pass --n or store n in the family file")
    rep = sharp_bounds(space, n, fam, policy, witnesses=args.witnesses)
    print(f"A={rep.A:.12g} B={rep.B:.12g} condition={rep.condition:.6g} "
          f"(space={rep.space}, policy={rep.weight_policy}, n={n}, points={rep.count})")
    if args.out:
        d = rep.to_dict()
        d["tolerances"] = tol.to_dict()
        if rep.witnesses is not None:
            d["witnesses"] = {"lower": rep.witnesses[:, 0], "upper": rep.witnesses[:, 1]}
        report.write_json(args.out, d)
    return 0


def _sweep_rows(res) -> list[dict]:
    return [{"n": r.n, "A_n": r.A, "B_n": r.B, "condition": r.condition, "policy": r.weight_policy,
             "points": r.count, "provenance": r.provenance} for r in res.rows]


def cmd_sweep(args, cfg, tol) -> int:
    recipe, params = _recipe_params(args, cfg)
    space = SpaceKind.parse(_pick(args.space, cfg.space if args.config else None, "bergman"))
    policy = _policy(_pick(args.policy, cfg.policy if args.config else None, "kernel-diag"))
    n_list = _pick(args.n_list, cfg.n_list)
    if not n_list:
        raise UsageError("--n-list is required")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise UsageError("n-list must be strictly increasing")
    factor = _pick(args.spread_factor, None, tol.spread_factor)
    floor = _pick(args.floor, None, tol.floor)
    try:
        res = sweep(space, lambda n: make_family(recipe, n, **params), n_list, policy, factor, floor)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = _sweep_rows(res)
    print(report.to_csv([{k: v for k, v in r.items() if k != "provenance"} for r in rows]), end="")
    print(f"spread_A={res.spread_A:.6g} spread_B={res.spread_B:.6g} min_A={res.min_A:.6g} "
          f"verdict={'pass' if res.verdict else 'fail'}")
    header = {"recipe": recipe, "params": params, "space": space.value, "verdict": res.verdict,
              "spread_A": res.spread_A, "spread_B": res.spread_B, "tolerances": tol.to_dict()}
    out_csv = _pick(args.out_csv, cfg.outputs.get("csv"))
    out_json = _pick(args.out_json, cfg.outputs.get("json"))
    if out_csv:
        report.write_csv(out_csv, rows, list(rows[0]), header)
    if out_json:
        report.write_json(out_json, {**res.to_dict(), "recipe": recipe, "params": params,
                                     "tolerances": tol.to_dict()})
    return 0 if res.verdict else 1


def cmd_verify_lemma(args, cfg, tol) -> int:
    if args.name not in CHECKS:
        raise UsageError(f"unknown lemma {args.name!r}; valid names: {', '.join(CHECKS)}")
    fn = CHECKS[args.name]
    accepted = inspect.signature(fn).parameters
    kwargs = {}
    for key in ("gamma", "n", "grid", "trials", "seed", "gamma0", "eps", "s", "angular_factor",
                "levels", "degree_max", "samples", "probes", "n_list"):
        v = getattr(args, key, None)
        if v is None:
            continue
        if key not in accepted:
            raise UsageError(f"{args.name} does not take --{key.replace('_', '-')}; it takes "
                             + ", ".join("--" + k.replace("_", "-") for k in accepted if k != "tol"))
        kwargs[key] = v
    try:
        res = fn(**kwargs, tol=tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    d = res.to_dict()
    d["tolerances"] = tol.to_dict()
    print(report.to_json({k: d[k] for k in ("name", "ok", "params", "details", "tolerances")}), end="")
    print(f"{res.name}: {'pass' if res.ok else 'fail'}")
    if args.out:
        report.write_json(args.out, d)
    return 0 if res.ok else 1


def cmd_example27(args, cfg, tol) -> int:
    gamma = _pick(args.gamma, cfg.gamma, 1.0)
    n_list = _pick(args.n_list, cfg.n_list, [16, 32, 64, 128, 256])
    mode = _pick(args.alpha_mode, cfg.params.get("alpha_mode") if args.config else None, "interior")
    space = SpaceKind.parse(_pick(args.space, cfg.space if args.config else None, "hardy"))
    policy = _policy(_pick(args.policy, cfg.policy if args.config else None, "kernel-diag"))
    if not gamma > 0 or any(n <= 2 * gamma for n in n_list):
        raise UsageError("need gamma > 0 and every n > 2 gamma")
    rows = []
    for n in n_list:
        try:
            alpha = example27_alpha(n, mode, args.alpha)
            fam = example27(n, gamma, alpha)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        ring = fam.subset(in_boundary_annulus(fam.points, n, gamma))
        a_ring = sharp_bounds(space, n, ring, policy).A
        # the radial projection of the extra point, so that alpha = 0 is covered too
        proj = np.concatenate([np.exp(2j * np.pi * np.arange(n) / n), [np.exp(2j * np.pi / n**2)]])
        p = Polynomial(np.r_[-1.0, np.zeros(n - 1), 1.0])
        decay = float(np.sum(np.abs(p(proj)) ** 2) / (n + 1))
        full = sharp_bounds(space, n, fam, policy)
        origin = sharp_bounds(space, n, example27(n, gamma, 0.0), policy)
        rows.append({"n": n, "alpha": alpha, "annulus_count": len(ring), "A_annulus": a_ring,
                     "decay": decay, "decay_times_n3": decay * n**3,
                     "A_full": full.A, "B_full": full.B, "A_origin": origin.A, "B_origin": origin.B})

    def spread(key):
        v = np.array([r[key] for r in rows])
        return float(v.max() / v.min()) if v.min() > 0 else math.inf

    part1 = all(r["annulus_count"] == r["n"] and r["A_annulus"] == 0.0
                for r in rows if r["alpha"] < 1 - gamma / r["n"])
    part2 = all(r["decay"] <= 40 / r["n"] ** 3 for r in rows)
    spreads = {k: spread(k) for k in ("A_full", "B_full", "A_origin", "B_origin")}
    part3 = (min(min(r["A_full"], r["A_origin"]) for r in rows) >= tol.floor
             and all(v <= tol.spread_factor for v in spreads.values()))
    print(report.to_csv(rows), end="")
    print(f"(i) rank deficient annulus part: {'pass' if part1 else 'fail'}")
    print(f"(ii) projected sum <= 40/n^3: {'pass' if part2 else 'fail'}")
    print(f"(iii) constants bounded, spreads {', '.join(f'{k}={v:.4g}' for k, v in spreads.items())}: "
          f"{'pass' if part3 else 'fail'}")
    out = _pick(args.out_csv, cfg.outputs.get("csv"))
    if out:
        header = {"gamma": gamma, "alpha_mode": mode, "space": space.value, "policy": policy.value,
                  "part_i": part1, "part_ii": part2, "part_iii": part3, "tolerances": tol.to_dict()}
        report.write_csv(out, rows, list(rows[0]), header)
    return 0 if (part1 and part2 and part3) else 1


def cmd_contract(args, cfg, tol) -> int:
    seed = _pick(args.seed, cfg.seed if args.config else None, 0)
    if args.family:
        try:
            fam = PointFamily.load(args.family)
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise UsageError(f"cannot read family {args.family}: {exc}") from None
        n = _pick(args.n, fam.n)
        gamma = _pick(args.gamma, fam.gamma)
    else:
        n = _pick(args.n, cfg.n_list[0] if cfg.n_list else None, 20)
        gamma = _pick(args.gamma, cfg.gamma, 0.3)
        try:
            fam = lift_to_annulus(torus_equispaced(n), gamma, RadiiPolicy("two-sided", seed))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if n is None or gamma is None:
        raise UsageError("need n and gamma (flags or family file)")
    if args.poly:
        try:
            with open(args.poly) as fh:
                p = Polynomial.from_dict(json.load(fh)).with_degree(n)
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise UsageError(f"cannot read polynomial {args.poly}: {exc}") from None
    else:
        p = random_polynomial(n, np.random.default_rng(seed), roots_spread=args.roots_spread)
    try:
        tr = contraction_iterate(fam, p, gamma, n, max_levels=args.levels)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = tr.rows()
    norms = np.array([r["norm_sq"] for r in rows])
    sums = np.array([r["sampling_sum"] for r in rows])
    ok = bool(np.all(np.diff(norms) <= tol.monotone_rtol * norms[:-1])
              and np.all(np.diff(sums) <= tol.monotone_rtol * sums[:-1])
              and np.all(norms >= tr.floor * norms[0] * (1 - tol.monotone_rtol)))
    header = {"n": n, "gamma": gamma, "seed": seed, "converged": tr.converged,
              "final_ratio": tr.final_ratio, "floor": tr.floor, "verdict": ok, "tolerances": tol.to_dict()}
    text = report.to_csv(rows, None, header)
    print(text, end="")
    if args.out_csv:
        _emit(text, args.out_csv)
    print(f"final_ratio={tr.final_ratio:.6g} floor={tr.floor:.6g} verdict={'pass' if ok else 'fail'}")
    return 0 if ok else 1


COMMANDS = {
    "kernel-profile": cmd_kernel_profile,
    "gen": cmd_gen,
    "certify": cmd_certify,
    "sweep": cmd_sweep,
    "verify-lemma": cmd_verify_lemma,
    "example27": cmd_example27,
    "contract": cmd_contract,
}


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in COMMANDS:
        if argv and argv[0] in ("-h", "--help"):
            build_parser().print_help()
            return 0
        what = f"unknown subcommand {argv[0]!r}" if argv else "missing subcommand"
        print(f"mzforge: {what}; valid subcommands: {', '.join(SUBCOMMANDS)}", file=sys.stderr)
        return 2
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _load_config(args)
        if args.config:
            cfg.validate()
        tol = _tolerances(args, cfg)
        with active_tolerances(tol):
            return COMMANDS[args.command](args, cfg, tol)
    except UsageError as exc:
        print(f"mzforge {args.command}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # invalid enum values, bad tolerance overrides, config validation
        print(f"mzforge {args.command}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
