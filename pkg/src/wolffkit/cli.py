"""Command-line front end: potential / riesz / kappa / intrinsic / solve /
verify / sweep / gen-corpus.

Every output file embeds the resolved configuration (and seed, when one is
involved) in '#' comment header lines, so runs are reproducible from their
outputs alone.  Exit codes: 0 pass, 1 check failure, 2 usage error,
3 numerical diagnostic.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import json
import os
import sys
import warnings

import numpy as np

from . import __version__
from .corpus import gen_corpus
from .embedding import KappaEstimate, KappaProfile, kappa_point_mass, \
    kappa_profile, kappa_simplex_ascent
from .intrinsic import intrinsic_potential
from .measure import (PointSet, as_atomic, load_measure, load_points,
                      save_measure, to_dict, zero_measure)
from .params import ParamError, auto_q, validate_params
from .quadrature import QuadratureConfig, QuadratureWarning
from .solver import apply_T, solve_monotone
from .verify import bilateral_bound, verify_sandwich
from .wolff import riesz_potential, wolff_potential

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _parse_params(spec: str, preset: str | None):
    parts = spec.split(",")
    if len(parts) != 4:
        raise ParamError(f"--params expects 'p,q,alpha,n', got {spec!r}")
    p, q, alpha = (float(v) for v in parts[:3])
    return validate_params(p, q, alpha, int(parts[3]), preset=preset)


def _quad_config(args) -> QuadratureConfig:
    rel_tol = float(os.environ.get("WOLFFKIT_REL_TOL",
                                   getattr(args, "rel_tol", 1e-8)))
    panels = int(os.environ.get("WOLFFKIT_PANELS_PER_DECADE",
                                getattr(args, "panels_per_decade", 32)))
    return QuadratureConfig(rel_tol=rel_tol, panels_per_decade=panels,
                            t_min_policy=getattr(args, "t_min_policy", "cell"))


def _header_lines(args, extra: dict | None = None) -> list[str]:
    cfg = {k: v for k, v in vars(args).items()
           if k not in ("func",) and v is not None}
    if extra:
        cfg.update(extra)
    cfg["version"] = __version__
    return [f"# config: {json.dumps(cfg, sort_keys=True, default=str)}"]


def _write_csv(path: str, header_lines: list[str], columns: list[str],
               rows) -> None:
    with open(path, "w", newline="") as f:
        for line in header_lines:
            f.write(line + "\n")
        w = csv.writer(f)
        w.writerow(columns)
        w.writerows(rows)


def _parse_radii(spec: str) -> np.ndarray:
    a, b, k = spec.split(":")
    return np.geomspace(float(a), float(b), int(k))


def _parse_point(spec: str) -> np.ndarray:
    return np.array([float(v) for v in spec.split(",")])


# -- subcommands ----------------------------------------------------------

def cmd_potential(args) -> int:
    pr = _parse_params(args.params, args.preset)
    m = load_measure(args.measure)
    pts = load_points(args.points)
    cfg = _quad_config(args)
    t_min = cfg.resolve_t_min(m.cell_size)
    rows = []
    for x in pts.points:
        v = wolff_potential(pr, m, x, cfg)
        rows.append(list(x) + [v, t_min])
    cols = [f"x{i}" for i in range(pts.dim)] + ["value", "trunc_t_min"]
    _write_csv(args.out, _header_lines(args), cols, rows)
    return EXIT_OK


def cmd_riesz(args) -> int:
    m = load_measure(args.measure)
    pts = load_points(args.points)
    cfg = _quad_config(args)
    rows = [list(x) + [riesz_potential(args.beta, m, x, cfg)]
            for x in pts.points]
    cols = [f"x{i}" for i in range(pts.dim)] + ["value"]
    _write_csv(args.out, _header_lines(args), cols, rows)
    return EXIT_OK


def cmd_kappa(args) -> int:
    pr = _parse_params(args.params, args.preset)
    sigma = load_measure(args.sigma)
    center = _parse_point(args.center)
    radii = _parse_radii(args.radii)
    cfg = _quad_config(args)
    method = {"ascent": "ascent", "pointmass": "pointmass"}[args.method]
    prof = kappa_profile(pr, sigma, center, radii, method=method, cfg=cfg)
    rows = [[r, e.value, e.direction, e.method, e.iterations]
            for r, e in zip(prof.radii, prof.estimates)]
    hdr = _header_lines(args, {"saturation_radius": prof.saturation_radius,
                               "center": list(map(float, center))})
    _write_csv(args.out, hdr, ["radius", "value", "direction", "method",
                               "iterations"], rows)
    return EXIT_OK


def _read_kappa_csv(path: str) -> tuple[KappaProfile, dict]:
    meta: dict = {}
    rows = []
    with open(path) as f:
        for line in f:
            if line.startswith("#"):
                if line.startswith("# config:"):
                    meta = json.loads(line.split(":", 1)[1])
                continue
            rows.append(line.rstrip("\n"))
    rdr = csv.DictReader(rows)
    radii, ests = [], []
    for rec in rdr:
        radii.append(float(rec["radius"]))
        ests.append(KappaEstimate(value=float(rec["value"]),
                                  direction=rec["direction"],
                                  method=rec["method"],
                                  iterations=int(rec["iterations"])))
    center = np.asarray(meta.get("center", [0.0]), dtype=float)
    sat = float(meta.get("saturation_radius", radii[-1]))
    prof = KappaProfile(center=center, radii=np.asarray(radii),
                        estimates=ests, saturation_radius=sat)
    return prof, meta


def cmd_intrinsic(args) -> int:
    pr = _parse_params(args.params, args.preset)
    prof, meta = _read_kappa_csv(args.kappa)
    cfg = _quad_config(args)
    value = intrinsic_potential(pr, prof, cfg)
    hdr = _header_lines(args, {"kappa_direction": prof.direction})
    _write_csv(args.out, hdr, ["value", "kappa_direction", "saturation_radius"],
               [[value, prof.direction, prof.saturation_radius]])
    return EXIT_OK


def cmd_solve(args) -> int:
    pr = _parse_params(args.params, args.preset)
    sigma = load_measure(args.sigma)
    mu = load_measure(args.mu) if args.mu else zero_measure(sigma.dim)
    pts = load_points(args.points) if args.points else None
    cfg = _quad_config(args)
    rep = solve_monotone(pr, sigma, mu, pts, args.u0, args.tol,
                         args.max_iter, cfg)
    tu = apply_T(pr, sigma, mu, rep.u, cfg)
    resid = np.abs(rep.u.values - tu.values) / (1.0 + np.abs(tu.values))
    rows = [list(x) + [u, r] for x, u, r in
            zip(rep.u.points.points, rep.u.values, resid)]
    cols = [f"x{i}" for i in range(rep.u.points.dim)] + ["u", "residual"]
    _write_csv(args.out, _header_lines(args, {"status": rep.status}), cols, rows)
    sidecar = {
        "status": rep.status,
        "iterations": rep.iterations,
        "residual_history": rep.residual_history,
        "u0_mode": rep.u0_mode,
        "seed_constant": rep.seed_constant,
        "n_sigma_atoms": rep.n_sigma_atoms,
        "version": __version__,
    }
    with open(args.out + ".json", "w") as f:
        json.dump(sidecar, f, indent=1)
    return EXIT_OK if rep.status == "converged" else EXIT_NUMERICAL


def _read_solve_csv(path: str, pr):
    pts, uvals = [], []
    rows = []
    with open(path) as f:
        for line in f:
            if not line.startswith("#"):
                rows.append(line.rstrip("\n"))
    for rec in csv.DictReader(rows):
        pts.append([float(v) for k, v in rec.items() if k.startswith("x")])
        uvals.append(float(rec["u"]))
    from .wolff import PotentialField
    ps = PointSet(np.asarray(pts), tag="solve")
    return PotentialField(params=pr, points=ps, values=np.asarray(uvals))


def cmd_verify(args) -> int:
    pr = _parse_params(args.params, args.preset)
    sigma = load_measure(args.sigma)
    mu = load_measure(args.mu) if args.mu else zero_measure(sigma.dim)
    cfg = _quad_config(args)
    u = _read_solve_csv(args.solve, pr)
    kprof, _ = _read_kappa_csv(args.kappa)
    # per-point bound: reuse the kappa ladder's resolution for each center
    from .verify import default_bound_ladder
    from .wolff import PotentialField
    n_ladder = len(kprof.radii)
    Rvals, term_rows = [], []
    for x in u.points.points:
        if sigma.total_mass == 0.0:
            R, terms = bilateral_bound(pr, sigma, mu, x, kprof, cfg)
        else:
            radii = default_bound_ladder(sigma, x, n_ladder)
            prof = kappa_profile(pr, sigma, x, radii, method="pointmass",
                                 cfg=cfg)
            R, terms = bilateral_bound(pr, sigma, mu, x, prof, cfg)
        Rvals.append(R)
        term_rows.append(terms)
    bound = PotentialField(params=pr, points=u.points, values=np.asarray(Rvals))

    class _Rep:  # duck-typed shell around the CSV-loaded field
        pass

    rep = _Rep()
    rep.u = u
    br = verify_sandwich(pr, sigma, mu, rep, bound)
    tu = apply_T(pr, sigma, mu, u, cfg)
    resid = float(np.max(np.abs(u.values - tu.values))
                  / max(float(np.max(u.values)), 1e-300))
    checks = {
        "fixed_point_residual": {"value": resid, "pass": resid < 2 * args.tol},
        "sandwich_spread": {"c1_emp": br.c1_emp, "c2_emp": br.c2_emp,
                            "ratio": br.c2_emp / br.c1_emp,
                            "pass": br.c2_emp / br.c1_emp <= args.spread_threshold},
    }
    audit = {
        "params": {"p": pr.p, "q": pr.q, "alpha": pr.alpha, "n": pr.n},
        "checks": checks,
        "ratios": br.ratios.tolist(),
        "terms": term_rows,
        "kappa_direction": kprof.direction,
        "version": __version__,
    }
    with open(args.out, "w") as f:
        json.dump(audit, f, indent=1)
    ok = all(c["pass"] for c in checks.values())
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_sweep(args) -> int:
    grids = {}
    for tok in args.params_grid.split():
        key, vals = tok.split("=")
        grids[key] = vals
    ps = [float(v) for v in grids.get("p", "2").split(",")]
    alphas = [float(v) for v in grids.get("alpha", "1").split(",")]
    ns = [int(v) for v in grids.get("n", "3").split(",")]
    q_spec = grids.get("q", "auto")

    jobs = []
    for p in ps:
        qs = [auto_q(p)] if q_spec == "auto" else \
            [float(v) for v in q_spec.split(",")]
        for q in qs:
            for alpha in alphas:
                for n in ns:
                    try:
                        pr = validate_params(p, q, alpha, n)
                    except ParamError:
                        continue
                    jobs.append(pr)

    work = []
    for pr in jobs:
        for name, m in gen_corpus(args.seed, pr.n, args.count):
            work.append((pr, m, name, args))

    # worker pool with deterministic merge: results land in job-index order
    if args.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(args.workers) as pool:
            staged = list(pool.map(_sweep_job, work))
    else:
        staged = [_sweep_job(w) for w in work]

    rows = [row for chunk in staged for row in chunk]
    cols = ["p", "q", "alpha", "n", "measure", "check", "value"]
    _write_csv(args.out, _header_lines(args, {"seed": args.seed}), cols, rows)
    return EXIT_OK


def _sweep_job(work) -> list:
    pr, m, name, args = work
    # quadrature shortfalls are data in a sweep, not fatal errors
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", QuadratureWarning)
        out = _sweep_checks(pr, m, name, args)
    n_warn = sum(issubclass(w.category, QuadratureWarning) for w in caught)
    out.append([pr.p, pr.q, pr.alpha, pr.n, name,
                "quadrature_warnings", n_warn])
    return out


def _sweep_checks(pr, m, name, args):
    cfg = _quad_config(args)
    base = [pr.p, pr.q, pr.alpha, pr.n, name]
    out = []
    x0 = np.zeros(m.dim)
    w0 = wolff_potential(pr, m, x0, cfg)
    out.append(base + ["wolff_at_origin", w0])
    sat = m.support_radius
    radii = np.geomspace(max(sat / 50, 1e-3), sat * 1.3, 10)
    prof = kappa_profile(pr, m, x0, radii, method="pointmass", cfg=cfg)
    out.append(base + ["kappa_total", float(prof.values[-1])])
    K = intrinsic_potential(pr, prof, cfg)
    out.append(base + ["intrinsic_at_origin", K])
    rep = solve_monotone(pr, m, zero_measure(m.dim), None, "seeded",
                         args.tol, args.max_iter, cfg)
    out.append(base + ["solve_iterations", rep.iterations])
    out.append(base + ["solve_sup_u", float(np.max(rep.u.values))])
    R = w0 ** pr.gamma + K
    if R > 0 and np.isfinite(R):
        # ratio at origin only when it belongs to the solve set; else sup-based
        out.append(base + ["sandwich_sup_ratio", float(np.max(rep.u.values)) / R])
    return out


def cmd_gen_corpus(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    corpus = gen_corpus(args.seed, args.n, args.count)
    manifest = []
    for name, m in corpus:
        path = os.path.join(args.out, f"{name}.json")
        save_measure(m, path)
        manifest.append({"name": name, "file": f"{name}.json",
                         "kind": m.kind, "total_mass": m.total_mass,
                         "support_radius": m.support_radius})
    with open(os.path.join(args.out, "manifest.json"), "w") as f:
        json.dump({"seed": args.seed, "n": args.n, "count": args.count,
                   "version": __version__, "measures": manifest},
                  f, indent=1, sort_keys=True)
    return EXIT_OK


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wolffkit",
                                 description="Nonlinear potential toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, params=True):
        if params:
            sp.add_argument("--params", required=True,
                            help="p,q,alpha,n (comma separated)")
            sp.add_argument("--preset", choices=["p-laplace", "hessian"])
        sp.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-8)
        sp.add_argument("--panels-per-decade", dest="panels_per_decade",
                        type=int, default=32)
        sp.add_argument("--t-min-policy", dest="t_min_policy",
                        choices=["zero", "cell"], default="cell")

    sp = sub.add_parser("potential", help="Wolff potential field")
    common(sp)
    sp.add_argument("--measure", required=True)
    sp.add_argument("--points", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_potential)

    sp = sub.add_parser("riesz", help="Riesz potential field")
    common(sp, params=False)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--measure", required=True)
    sp.add_argument("--points", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_riesz)

    sp = sub.add_parser("kappa", help="embedding-constant profile")
    common(sp)
    sp.add_argument("--sigma", required=True)
    sp.add_argument("--center", required=True, help="comma separated point")
    sp.add_argument("--radii", required=True, help="a:b:k geometric ladder")
    sp.add_argument("--method", choices=["ascent", "pointmass"],
                    default="pointmass")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_kappa)

    sp = sub.add_parser("intrinsic", help="intrinsic potential from a kappa profile")
    common(sp)
    sp.add_argument("--kappa", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_intrinsic)

    sp = sub.add_parser("solve", help="monotone fixed-point solve")
    common(sp)
    sp.add_argument("--sigma", required=True)
    sp.add_argument("--mu")
    sp.add_argument("--points")
    sp.add_argument("--u0", choices=["zero", "seeded"], default="zero")
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--max-iter", dest="max_iter", type=int, default=500)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="bilateral-bound audit")
    common(sp)
    sp.add_argument("--sigma", required=True)
    sp.add_argument("--mu")
    sp.add_argument("--solve", required=True)
    sp.add_argument("--kappa", required=True)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--spread-threshold", dest="spread_threshold",
                    type=float, default=100.0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="parameter-grid sweep over a corpus")
    common(sp, params=False)
    sp.add_argument("--params-grid", dest="params_grid", required=True,
                    help="e.g. 'p=2,2.5 q=auto alpha=1 n=3,5'")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=4)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--max-iter", dest="max_iter", type=int, default=300)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("gen-corpus", help="write a seeded measure corpus")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_gen_corpus)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0,) else 0
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", QuadratureWarning)
            return args.func(args)
    except QuadratureWarning as e:
        print(f"error: numerical diagnostic: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ParamError, ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
