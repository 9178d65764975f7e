"""Command-line interface: ``cocycle <subcommand> ...``.

Exit codes: 0 success, 1 parse or I/O error (including bad command lines),
2 validation failure, 3 precondition violation such as ``p`` outside (0, 1).
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
from fractions import Fraction
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import analysis, chain, codec, exclusion, render, samplers
from .errors import CocycleError, CocycleViolation, DomainError, ParseError
from .lattice import Vertex, balance_slope, integrate_height, marginals, validate_cocycle

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_PRECONDITION = 0, 1, 2, 3
MODELS = ("strip", "dpath", "yaguchi", "indep", "stripes", "checker")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _pair(text):
    vals = _int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}")
    return tuple(vals)


def _prob(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _dump_json(path, obj):
    text = json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def meta_path(path):
    return str(path) + ".meta.json"


def _read_meta(path):
    try:
        with open(meta_path(path)) as fh:
            return json.load(fh)
    except FileNotFoundError:
        return None


# ---------------------------------------------------------------------------
# sample


def build_sample(args):
    """Returns ``(cfg, color_field_or_None, params_dict)``."""
    W, H, seed = args.width, args.height, args.seed
    p = float(args.p)
    m = args.model
    field = None
    if m == "strip":
        cfg = samplers.sample_strip_quadrant(samplers.StripParams(p, W, H, seed))
        params = {"p": p}
    elif m == "dpath":
        spec = samplers.DirectedPathSpec(args.M, W, H, args.center)
        cfg = samplers.sample_via_directed_path(p, spec, seed)
        params = {"p": p, "M": args.M, "center": list(spec.centre)}
    elif m == "yaguchi":
        yp = exclusion.YaguchiParams(W, H, args.rho_blue, args.rho_red, args.hop, args.burn_in, seed)
        field, cfg = exclusion.sample_yaguchi(yp)
        params = {"rho_blue": yp.rho_blue, "rho_red": yp.rho_red, "hop_prob": yp.hop_prob, "burn_in": yp.burn_in}
    elif m == "indep":
        ip = samplers.IndependentParams(float(args.ph1), float(args.pv1), W, H, seed)
        cfg = samplers.sample_independent(ip)
        params = {"pH1": ip.pH1, "pV1": ip.pV1}
    elif m == "stripes":
        cfg = samplers.fixture_stripes(W, H)
        params = {}
    else:
        cfg = samplers.fixture_checkerboard(W, H, tuple(args.shift))
        params = {"shift": list(args.shift)}
    return cfg, field, params


def cmd_sample(args):
    cfg, field, params = build_sample(args)
    codec.write_config(args.output, cfg)
    meta = {
        "tool": "cocycle",
        "version": __version__,
        "model": args.model,
        "width": args.width,
        "height": args.height,
        "seed": args.seed,
        "params": params,
    }
    _dump_json(meta_path(args.output), meta)
    if args.colors_out:
        if field is None:
            raise DomainError("--colors-out is only available for --model yaguchi")
        with open(args.colors_out, "w") as fh:
            fh.write(field.to_text())
    return EXIT_OK


# ---------------------------------------------------------------------------
# validate


def cmd_validate(args):
    cfg = codec.read_config(args.input)
    rep = validate_cocycle(cfg)
    if args.json:
        _dump_json(args.json, {"valid": rep.valid, "violations": [list(p) for p in rep.violations],
                               "version": __version__})
    if not rep.valid:
        shown = rep.violations[:20]
        print(f"{args.input}: {len(rep.violations)} plaquette violation(s)", file=sys.stderr)
        for x, y in shown:
            print(f"  plaquette ({x}, {y})", file=sys.stderr)
        if len(rep.violations) > len(shown):
            print(f"  ... {len(rep.violations) - len(shown)} more", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze


def _fitting(radii, limit):
    return [r for r in radii if r <= limit]


def analyze_config(cfg, anchor=None, eps=0.2, radii=None, dead_lengths=(8, 16, 32, 64)):
    """Full report dict (without ``meta``) and CSV curve rows."""
    W, H = cfg.width, cfg.height
    if anchor is None:
        anchor = (W // 2, H // 2)
    hf = integrate_height(cfg, Vertex(*anchor))
    cs = analysis.zero_clusters(cfg, hf)
    marg = marginals(cfg)
    hm, vm = marg.as_floats()
    curves = []
    report = {
        "marginals": {"h": hm, "v": vm, "h_exact": str(marg.h_hat), "v_exact": str(marg.v_hat)},
    }
    largest = cs.largest()
    report["clusters"] = {
        "count": cs.n_clusters,
        "largest": cs.record(largest)._asdict(),
        "top_sizes": sorted(cs.sizes.tolist(), reverse=True)[:10],
    }

    cid = int(cs.labels[anchor[1], anchor[0]])
    reach = 2 * min(anchor[0], anchor[1], W - anchor[0], H - anchor[1])
    sides = [2 ** k for k in range(1, 32) if 2 ** k <= reach]
    if sides:
        dens = analysis.cluster_density(cs, cid, sides, anchor)
        report["density"] = {"cluster": cid, "sides": dens.sides, "counts": dens.counts, "ratios": dens.ratios}
        curves += [("density", s, r) for s, r in zip(dens.sides, dens.ratios)]
    else:
        report["density"] = {"cluster": cid, "sides": [], "counts": [], "ratios": []}

    if radii is None:
        radii = [2 ** k for k in range(2, 32) if 2 ** k <= W + H]
    degenerate = not (0 < hm < 1 and 0 < vm < 1)
    if degenerate:
        report["cones"] = {"eps": eps, "error": "degenerate marginals"}
    else:
        cones = analysis.cone_outside_fraction(hf, marg, eps, radii)
        report["cones"] = {"eps": eps, "alpha": balance_slope(hm, vm), "rows": cones}
        curves += [("cone_outside", c["R"], c["fraction"]) for c in cones]

    directional = {}
    rays = [("east", 0.0, True, W - anchor[0]), ("north", math.inf, True, H - anchor[1])]
    if not degenerate:
        a0 = balance_slope(hm, vm)
        # the balance slope is never positive, so the east ray descends
        dx_room = min(W - anchor[0], anchor[1] / -a0 if a0 else math.inf)
        rays.append(("balance", a0, True, dx_room * (1 - a0)))
    for name, alpha, east, room in rays:
        rs = _fitting(radii, room)
        rows = []
        for R in rs:
            try:
                res = analysis.directional_ratio(hf, alpha, [R], marg, east)
            except ValueError:
                continue
            rows.append({"R": R, "point": list(res.points[0]), "ratio": res.ratios[0], "limit": res.limit})
            curves.append((f"directional_{name}", R, res.ratios[0]))
        directional[name] = {"alpha": alpha, "rows": rows}
    report["directional"] = directional

    sp = analysis.spanning_stats(cs)
    boundaries = []
    for c in sorted(set(sp.ns_ids) | set(sp.ew_ids)):
        try:
            lb = analysis.left_boundary(cs, c, cfg)
        except CocycleError:
            boundaries.append({"cluster": c, "verdict": None})
            continue
        boundaries.append({"cluster": c, "verdict": lb.verdict, "gaps": len(lb.gaps)})
    report["spanning"] = {
        "ns": sp.ns, "ew": sp.ew, "ns_distinct_f": sp.ns_distinct_f, "ew_distinct_f": sp.ew_distinct_f,
        "ns_ids": sp.ns_ids, "ew_ids": sp.ew_ids, "left_boundaries": boundaries,
    }

    dead = []
    L_max = max(dead_lengths) if dead_lengths else 0
    depth = analysis.directed_depth(cfg, L_max) if L_max else None
    for L in dead_lengths:
        r = analysis.dead_end_scan(cfg, L, depth)
        dead.append({"L": L, "count": r.count, "eligible": r.eligible, "frequency": r.frequency})
        curves.append(("dead_end", L, r.frequency))
    report["dead_ends"] = dead
    return report, curves


def cmd_analyze(args):
    cfg = codec.read_config(args.input)
    rep = validate_cocycle(cfg)
    if not rep.valid:
        x, y = rep.violations[0]
        print(f"{args.input}: not a cocycle (first violation at plaquette ({x}, {y}))", file=sys.stderr)
        return EXIT_INVALID
    report, curves = analyze_config(cfg, args.anchor, args.eps, args.radii, args.dead_lengths)
    source = _read_meta(args.input) or {}
    report["meta"] = {
        "version": __version__,
        "seed": source.get("seed"),
        "params": source.get("params"),
        "model": source.get("model"),
        "source": os.path.basename(args.input),
        "analysis": {"anchor": args.anchor, "eps": args.eps, "radii": args.radii,
                     "dead_lengths": args.dead_lengths},
    }
    _dump_json(args.output, report)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["curve", "x", "value", "seed", "version"])
            for name, x, val in curves:
                w.writerow([name, x, repr(float(val)), source.get("seed"), __version__])
    return EXIT_OK


# ---------------------------------------------------------------------------
# chain


def chain_report(p):
    P = chain.derive_transition_matrix(p)
    pi = chain.stationary_distribution(P)
    back = chain.backward_completion_distribution(P, pi)
    return {
        "p": float(P.p),
        "p_exact": str(P.p),
        "states": list(chain.STATE_CODES),
        "matrix": P.array.tolist(),
        "matrix_exact": [[str(e) for e in row] for row in P.entries],
        "row_sums": P.array.sum(axis=1).tolist(),
        "stationary": pi.probs.tolist(),
        "stationary_exact": [str(e) for e in pi.exact] if pi.exact is not None else None,
        "stationary_residual": chain.stationary_residual(P, pi.probs),
        "reversal": chain.reversal_check(P, pi),
        "backward_completion": {
            f"top={t},right={r}": {f"left={l},bottom={b}": float(w) for (l, b), w in sorted(d.items())}
            for (t, r), d in sorted(back.items())
        },
        "version": __version__,
    }


def cmd_chain(args):
    _dump_json(args.output, chain_report(args.p))
    return EXIT_OK


# ---------------------------------------------------------------------------
# experiment


def _spanning_job(job):
    model, size, seed, p, extra = job
    if model == "strip":
        cfg = samplers.sample_strip_quadrant(samplers.StripParams(p, size, size, seed))
    elif model == "dpath":
        cfg = samplers.sample_via_directed_path(p, samplers.DirectedPathSpec(extra["M"], size, size), seed)
    elif model == "indep":
        cfg = samplers.sample_independent(samplers.IndependentParams(extra["pH1"], extra["pV1"], size, size, seed))
    else:
        yp = exclusion.YaguchiParams(size, size, extra["rho_blue"], extra["rho_red"], extra["hop_prob"],
                                     extra["burn_in"], seed)
        cfg = exclusion.sample_yaguchi(yp)[1]
    sp = analysis.spanning_stats(analysis.zero_clusters(cfg))
    return sp.ns > 0, sp.ew > 0


def run_experiment(model, sizes, n_seeds, base_seed, p, extra, jobs=1):
    """Spanning counts per size; seeds ``base_seed .. base_seed + n_seeds - 1``.

    Results are merged in (size, seed) order regardless of scheduling.
    """
    work = [(model, s, base_seed + i, p, extra) for s in sizes for i in range(n_seeds)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_spanning_job, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        results = [_spanning_job(w) for w in work]
    rows = []
    for k, size in enumerate(sizes):
        chunk = results[k * n_seeds:(k + 1) * n_seeds]
        ns = sum(r[0] for r in chunk)
        ew = sum(r[1] for r in chunk)
        rows.append({"size": size, "seeds": n_seeds, "ns_spanning": ns, "ew_spanning": ew,
                     "ns_frequency": ns / n_seeds, "ew_frequency": ew / n_seeds})
    return rows


def cmd_experiment(args):
    if args.model in ("stripes", "checker"):
        raise DomainError("experiment needs a random model")
    if args.seeds < 1 or any(s < 1 for s in args.sizes) or args.jobs < 1:
        raise DomainError("sizes, seeds and jobs must be positive")
    p = float(args.p)
    extra = {}
    if args.model in ("strip", "dpath"):
        samplers.check_probability(p)
    if args.model == "dpath":
        extra = {"M": args.M}
    elif args.model == "indep":
        extra = {"pH1": float(args.ph1), "pV1": float(args.pv1)}
    elif args.model == "yaguchi":
        extra = {"rho_blue": args.rho_blue, "rho_red": args.rho_red, "hop_prob": args.hop, "burn_in": args.burn_in}
        exclusion.YaguchiParams(1, 1, **extra)
    rows = run_experiment(args.model, args.sizes, args.seeds, args.seed, p, extra, args.jobs)
    params = json.dumps({"p": p, **extra}, sort_keys=True)
    out = sys.stdout if args.output in (None, "-") else open(args.output, "w", newline="")
    try:
        w = csv.writer(out)
        w.writerow(["model", "size", "seeds", "ns_spanning", "ew_spanning", "ns_frequency", "ew_frequency",
                    "base_seed", "params", "version"])
        for r in rows:
            w.writerow([args.model, r["size"], r["seeds"], r["ns_spanning"], r["ew_spanning"],
                        repr(r["ns_frequency"]), repr(r["ew_frequency"]), args.seed, params, __version__])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# ---------------------------------------------------------------------------
# render


def cmd_render(args):
    cfg = codec.read_config(args.input)
    fmt = args.format or ("svg" if str(args.output).lower().endswith(".svg") else "ppm")
    colors = None
    if args.colors:
        with open(args.colors) as fh:
            colors = exclusion.parse_colors(fh.read())
        if colors.shape != (cfg.height + 1, cfg.width + 1):
            raise DomainError("colour grid does not match the configuration window")
    need_clusters = args.clusters or args.boundaries
    cs = analysis.zero_clusters(cfg) if need_clusters else None
    boundaries = None
    if args.boundaries:
        sp = analysis.spanning_stats(cs)
        ids = sorted(set(sp.ns_ids) | set(sp.ew_ids)) or [cs.largest()]
        boundaries = []
        for c in ids:
            try:
                boundaries.extend(analysis.left_boundary(cs, c, cfg).segments)
            except CocycleError:
                pass
    anchor = args.anchor or (cfg.width // 2, cfg.height // 2)
    marg = None
    if args.cone is not None:
        marg = marginals(cfg).as_floats()
        if not all(0 < m < 1 for m in marg):
            raise DomainError("cone overlay needs marginals strictly between 0 and 1")
    style = render.RenderStyle(scale=args.scale, show_clusters=args.clusters, show_green=colors is not None,
                               show_boundaries=args.boundaries, cone_eps=args.cone)
    source = _read_meta(args.input) or {}
    meta = {"version": __version__, "seed": source.get("seed"), "params": source.get("params"),
            "model": source.get("model"), "scale": args.scale}
    data = render.render(cfg, cs, colors, style, fmt, boundaries, anchor, marg, meta)
    with open(args.output, "wb") as fh:
        fh.write(data)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _add_model_flags(sp, with_window=True):
    sp.add_argument("--model", choices=MODELS, required=True)
    sp.add_argument("-p", type=_prob, default=Fraction(1, 2), help="bottom-label probability (strip, dpath)")
    if with_window:
        sp.add_argument("-W", "--width", type=int, required=True)
        sp.add_argument("-H", "--height", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--M", type=int, default=0, help="flat half-length of the directed path")
    sp.add_argument("--rho-blue", type=float, default=0.3)
    sp.add_argument("--rho-red", type=float, default=0.3)
    sp.add_argument("--hop", type=float, default=0.5, help="hop probability of the exclusion process")
    sp.add_argument("--burn-in", type=int, default=256)
    sp.add_argument("--ph1", type=_prob, default=Fraction(1, 2))
    sp.add_argument("--pv1", type=_prob, default=Fraction(1, 2))


def build_parser():
    parser = _Parser(prog="cocycle", description=__doc__.splitlines()[0], add_help=True)
    parser.add_argument("--version", action="version", version=f"cocycle {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("sample", help="draw a configuration and write it as COCY")
    _add_model_flags(sp)
    sp.add_argument("--center", type=_pair, default=None, help="directed path centre 'x,y'")
    sp.add_argument("--shift", type=_pair, default=(0, 0), help="checkerboard shift 'sx,sy'")
    sp.add_argument("--colors-out", default=None, help="write the particle colour grid (yaguchi)")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_sample)

    vp = sub.add_parser("validate", help="check the plaquette identity")
    vp.add_argument("input")
    vp.add_argument("--json", default=None, help="also write the violation list as JSON")
    vp.set_defaults(func=cmd_validate)

    ap = sub.add_parser("analyze", help="cluster and height-field report")
    ap.add_argument("input")
    ap.add_argument("-o", "--output", default="-")
    ap.add_argument("--csv", default=None)
    ap.add_argument("--anchor", type=_pair, default=None)
    ap.add_argument("--eps", type=float, default=0.2)
    ap.add_argument("--radii", type=_int_list, default=None)
    ap.add_argument("--dead-lengths", type=_int_list, default=[8, 16, 32, 64])
    ap.set_defaults(func=cmd_analyze)

    cp = sub.add_parser("chain", help="transition matrix and stationary law of the strip chain")
    cp.add_argument("-p", type=_prob, required=True)
    cp.add_argument("-o", "--output", default="-")
    cp.set_defaults(func=cmd_chain)

    ep = sub.add_parser("experiment", help="spanning frequency sweep over window sizes")
    _add_model_flags(ep, with_window=False)
    ep.add_argument("--sizes", type=_int_list, required=True)
    ep.add_argument("--seeds", type=int, default=200)
    ep.add_argument("--jobs", type=int, default=1)
    ep.add_argument("-o", "--output", default="-")
    ep.set_defaults(func=cmd_experiment)

    rp = sub.add_parser("render", help="draw a configuration as PPM or SVG")
    rp.add_argument("input")
    rp.add_argument("-o", "--output", required=True)
    rp.add_argument("--format", choices=("ppm", "svg"), default=None)
    rp.add_argument("--scale", type=int, default=4)
    rp.add_argument("--clusters", action="store_true")
    rp.add_argument("--boundaries", action="store_true")
    rp.add_argument("--cone", type=float, default=None, metavar="EPS")
    rp.add_argument("--anchor", type=_pair, default=None)
    rp.add_argument("--colors", default=None, help="colour grid written by 'sample --colors-out'")
    rp.set_defaults(func=cmd_render)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_IO
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"cocycle: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"cocycle: {exc}", file=sys.stderr)
        return EXIT_IO
    except CocycleViolation as exc:
        print(f"cocycle: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (CocycleError, ValueError) as exc:
        print(f"cocycle: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
