"""Command-line interface.

Subcommands: solve (single partition), sweep (family), baseline, verify
(identity suite), efr (scaling oracle for the tangent-ball distance
integral), dini (integrability checker).  Exit codes: 0 full success, 2
partial per-record failure, 1 on configuration errors.

``--seed`` is accepted everywhere for interface stability and ignored: the
solver pipeline is deterministic (the verify suite uses a fixed seed).
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import experiments
from .assembly import assemble, brute_force_energy, build_mesh
from .eigensolver import DiscParams, dirichlet_baseline, richardson_extrapolate
from .errors import ConfigError, DivergentIntegral, MixedFracError
from .fracops import KernelOrder, ModulusOfContinuity, dini_check, make_order
from .geometry import Domain1D
from .nonlocal_ops import (
    e_of_r,
    gauss_residual_relative,
    parts_residual_relative,
)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=str, default=None, help="JSON config path")
    p.add_argument("--out", type=str, default=None, help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for sweeps")
    p.add_argument("--seed", type=int, default=None,
                   help="accepted for interface stability; unused (deterministic)")


def _load_config(args) -> experiments.ExperimentConfig:
    if not args.config:
        raise ConfigError("--config is required for this subcommand")
    return experiments.ExperimentConfig.from_file(args.config)


def _ensure_out(args) -> str | None:
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    return args.out


def cmd_solve(args) -> int:
    cfg = _load_config(args)
    cfg1 = experiments.ExperimentConfig(
        dimension=cfg.dimension, s=cfg.s, omega=cfg.omega, family=cfg.family,
        k_list=cfg.k_list[:1], disc=cfg.disc, solver=cfg.solver,
        outputs=cfg.outputs, verify=cfg.verify, raw=cfg.raw)
    result = experiments.run(cfg1, jobs=1)
    r = result.records[0]
    if r.error:
        print(f"k={r.k}: FAILED ({r.error})")
        return 2
    print(f"k={r.k} param={r.param:g} lambda1={r.lambda1:.10f} "
          f"baseline={r.baseline:.10f} gap={r.gap:.3e} iters={r.iters}")
    experiments.emit(result, cfg1, out_dir=_ensure_out(args))
    return 0


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    result = experiments.run(cfg, jobs=max(1, args.jobs))
    paths = experiments.emit(result, cfg, out_dir=_ensure_out(args))
    for r in result.records:
        status = f"lambda1={r.lambda1:.10f} gap={r.gap:.3e}" if not r.error \
            else f"FAILED ({r.error})"
        print(f"k={r.k} param={r.param:g} {status}")
    for name, path in paths.items():
        print(f"wrote {name}: {path}")
    if "gap_vs_param" in result.fits:
        sl, ic, r2 = result.fits["gap_vs_param"]
        print(f"gap ~ param^{sl:.3f} (r2 = {r2:.4f})")
    return 2 if result.n_failed else 0


def cmd_baseline(args) -> int:
    cfg = _load_config(args)
    order = make_order(cfg.dimension, cfg.s)
    if args.richardson:
        hs = [float(t) for t in args.richardson.split(",")]
        if len(hs) != 3:
            raise ConfigError("--richardson needs three comma-separated h values")
        lams = []
        for h in hs:
            disc = DiscParams(h=h, L=cfg.disc.L, scheme=cfg.disc.scheme)
            lam = dirichlet_baseline(cfg.omega, order, disc, cfg.solver).lambda1
            lams.append(lam)
            print(f"h={h:g}: lambda1 = {lam:.10f}")
        limit, rate = richardson_extrapolate(hs, lams)
        print(f"extrapolated lambda1 = {limit:.10f} (rate {rate:.3f})")
    else:
        res = dirichlet_baseline(cfg.omega, order, cfg.disc, cfg.solver)
        print(f"h={cfg.disc.h:g}: lambda1 = {res.lambda1:.10f} "
              f"(iters {res.iterations}, residual {res.rq_residual:.2e})")
    return 0


def cmd_verify(args) -> int:
    """Identity suite: symmetry, constants in the kernel of K, Gauss and
    integration-by-parts residuals, brute-force pair-bookkeeping oracle."""
    if args.config:
        cfg = _load_config(args)
        omega, s = cfg.omega, cfg.s
        h, L, scheme = cfg.disc.h, cfg.disc.L, cfg.disc.scheme
    else:
        omega, s, h, L, scheme = Domain1D(-1.0, 1.0), 0.5, 0.05, 8.0, "P1"
    order = make_order(1, s)
    from .geometry import ExteriorPartition, ExteriorSet, _complement_in_exterior
    neumann = _complement_in_exterior(omega, ExteriorSet())
    part = ExteriorPartition(omega=omega, dirichlet=ExteriorSet(), neumann=neumann)
    mesh = build_mesh(omega, part, h, L, scheme, order=order)
    system = assemble(mesh, order)
    ok = True

    asym = float(np.max(np.abs(system.K - system.K.T)))
    line = "PASS" if asym == 0.0 else "FAIL"
    ok &= asym == 0.0
    print(f"{line} symmetry: max|K - K'| = {asym:.1e}")

    ones = np.ones(system.n_free)
    k1 = float(np.max(np.abs(system.K @ ones))) / float(np.max(np.abs(system.K)))
    good = k1 <= 1e-12
    ok &= good
    print(f"{'PASS' if good else 'FAIL'} constants: |K 1|/|K| = {k1:.2e}")

    rng = np.random.default_rng(0)
    worst_g = worst_p = 0.0
    for _ in range(10):
        u = rng.standard_normal(system.n_free)
        v = rng.standard_normal(system.n_free)
        worst_g = max(worst_g, gauss_residual_relative(system, u))
        worst_p = max(worst_p, parts_residual_relative(system, u, v))
    good = worst_g <= 1e-12 and worst_p <= 1e-12
    ok &= good
    print(f"{'PASS' if good else 'FAIL'} gauss/parts residuals: "
          f"{worst_g:.2e} / {worst_p:.2e} (tol 1e-12)")

    small = build_mesh(omega, part, omega.length / 4.0, 4 * omega.length,
                       scheme, order=order)
    ssys = assemble(small, order)
    worst_bf = 0.0
    for _ in range(3):
        u = rng.standard_normal(ssys.n_free)
        exact = float(u @ (ssys.K @ u))
        brute = brute_force_energy(ssys, u)
        worst_bf = max(worst_bf, abs(exact - brute) / max(abs(exact), 1e-300))
    good = worst_bf <= 1e-10
    ok &= good
    print(f"{'PASS' if good else 'FAIL'} brute-force pair sum: rel diff {worst_bf:.2e}")
    return 0 if ok else 2


def cmd_efr(args) -> int:
    exps = range(args.rmin_exp, args.rmax_exp + 1)
    try:
        rows = [(2.0 ** -j, e_of_r(2.0 ** -j, args.s, dimension=args.dimension))
                for j in exps]
    except DivergentIntegral as exc:
        print(f"DivergentIntegral: {exc}")
        return 0
    for r, val in rows:
        print(f"r=2^-{int(-math.log2(r))}: E(r) = {val:.10e}  "
              f"E/r^(N-2s) = {val / r ** (args.dimension - 2 * args.s):.10e}")
    xs = np.log([r for r, _ in rows])
    ys = np.log([v for _, v in rows])
    slope = float(np.polyfit(xs, ys, 1)[0])
    print(f"log-log slope = {slope:.4f} (N - 2s = {args.dimension - 2 * args.s:.4f})")
    return 0


def _parse_modulus(spec: str) -> ModulusOfContinuity:
    if spec == "log_spine":
        return ModulusOfContinuity.log_spine()
    if spec.startswith("power:"):
        return ModulusOfContinuity.power(float(spec.split(":", 1)[1]))
    if spec.startswith("table:"):
        pairs = [tuple(map(float, p.split(":"))) for p in spec[6:].split(",")]
        return ModulusOfContinuity.from_table([t for t, _ in pairs],
                                              [v for _, v in pairs])
    raise ConfigError(f"cannot parse modulus spec {spec!r}")


def _parse_kernel(spec: str) -> KernelOrder:
    if spec.startswith("power:"):
        return KernelOrder.power(float(spec.split(":", 1)[1]))
    if spec.startswith("table:"):
        pairs = [tuple(map(float, p.split(":"))) for p in spec[6:].split(",")]
        return KernelOrder.from_table([t for t, _ in pairs], [v for _, v in pairs])
    raise ConfigError(f"cannot parse kernel spec {spec!r}")


def cmd_dini(args) -> int:
    omega0 = _parse_modulus(args.omega0)
    kernel = _parse_kernel(args.kernel)
    res = dini_check(omega0, kernel)
    if res.converges:
        print(f"Finite({res.value:.10g})  [exponent {res.exponent:.4g}]")
    else:
        print(f"Divergent  [exponent {res.exponent:.4g}]")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mixedfrac",
        description="Mixed exterior-data fractional eigenvalue laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a single partition (first k of the config)")
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="run a family sweep and emit outputs")
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("baseline", help="all-Dirichlet principal eigenvalue")
    _add_common(p)
    p.add_argument("--richardson", type=str, default=None,
                   help="three comma-separated h values for extrapolation")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("verify", help="run the matrix-identity suite")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("efr", help="tangent-ball distance-integral scaling oracle")
    _add_common(p)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--dimension", type=int, default=2)
    p.add_argument("--rmin-exp", type=int, default=3, help="smallest r is 2^-rmax_exp")
    p.add_argument("--rmax-exp", type=int, default=8)
    p.set_defaults(func=cmd_efr)

    p = sub.add_parser("dini", help="integrability classifier for modulus/kernel pairs")
    _add_common(p)
    p.add_argument("--omega0", type=str, required=True,
                   help="power:BETA | log_spine | table:t:v,t:v,...")
    p.add_argument("--kernel", type=str, required=True,
                   help="power:ALPHA | table:t:v,t:v,...")
    p.set_defaults(func=cmd_dini)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except MixedFracError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
