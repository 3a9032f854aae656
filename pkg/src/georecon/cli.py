"""Command-line front end.

Exit codes: 0 success, 2 failed precondition or validation, 64 usage
error, 74 unreadable or unwritable file.  Numbers are printed in their
shortest round-trip form.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import io
from .complex import SimplicialComplex, cech_complex, cech_filtration, rips_complex, rips_filtration
from .geometry import NoiseModel
from .homology import betti, compute_persistence, fmt, persistent_betti, theorem_scales
from .intrinsic import build_eps_graph, compute_d_eps, d_eps_metric, metric_to_csv_rows
from .reconstruct import ShadowComplex, export_svg, run_reconstruction
from .shapes import REGISTRY, ShapeSpec, builtin, check_sampling, sample_off_nodes, sample_shape

EX_OK, EX_FAIL, EX_USAGE, EX_IOERR = 0, 2, 64, 74


class UsageError(Exception):
    pass


class ValidationFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# --------------------------------------------------------------------------
# shape arguments


def _add_shape_args(p, required: bool = False) -> None:
    g = p.add_argument_group("shape")
    src = g.add_mutually_exclusive_group(required=required)
    src.add_argument("--shape", choices=sorted(REGISTRY), help="built-in shape")
    src.add_argument("--spec", help="shape spec JSON file")
    g.add_argument("--r", type=float, help="circle radius")
    g.add_argument("--a", type=float, help="lemniscate size")
    g.add_argument("--p", type=int, help="Lissajous x frequency")
    g.add_argument("--q", type=int, help="Lissajous y frequency")
    g.add_argument("--phase", type=float, help="Lissajous phase")
    g.add_argument("--side", type=float, help="edge length for the built-in graphs")


def _shape(args) -> ShapeSpec | None:
    if getattr(args, "spec", None):
        return ShapeSpec.from_dict(io.read_json(args.spec))
    if not getattr(args, "shape", None):
        return None
    names = {"circle": {"r": "radius"}, "lemniscate": {"a": "a"},
             "lissajous": {"p": "p", "q": "q", "phase": "phase"},
             "square": {"side": "side"}, "figure_eight": {"side": "side"}, "theta": {"side": "side"}}
    allowed = names[args.shape]
    params = {}
    for flag in ("r", "a", "p", "q", "phase", "side"):
        v = getattr(args, flag)
        if v is None:
            continue
        if flag not in allowed:
            raise UsageError(f"--{flag} does not apply to shape {args.shape}")
        params[allowed[flag]] = v
    if args.shape == "lissajous" and "delta" in args and args.delta is not None:
        params["delta"] = args.delta
    return builtin(args.shape, **params)


def _constants(args, spec: ShapeSpec | None):
    """delta, rho, b from flags, falling back to the shape's stored values."""
    delta = args.delta if args.delta is not None else (spec.distortion if spec else None)
    rho = args.rho if getattr(args, "rho", None) is not None else (spec.convexity_radius if spec else None)
    b = args.b if getattr(args, "b", None) is not None else (spec.shortest_cycle if spec else None)
    return delta, rho, b


# --------------------------------------------------------------------------
# commands


def cmd_sample(args) -> int:
    spec = _shape(args)
    if spec is None:
        raise UsageError("sample needs --shape or --spec")
    noise = NoiseModel(args.noise, args.seed)
    if args.clearance is not None:
        s = sample_off_nodes(spec, args.n, args.clearance, noise)
    else:
        s = sample_shape(spec, args.n, noise)
    line = f"dH_bound {fmt(s.dh_bound)}"
    if args.out:
        io.write_cloud(args.out, s.cloud)
        _out(line)
    else:
        for row in s.cloud.points:
            _out(",".join(fmt(v) for v in row))
        print(line, file=sys.stderr)
    return EX_OK


def _complex_summary(K: SimplicialComplex) -> str:
    return "\n".join(f"simplices{k} {len(K.of_dim(k))}" for k in range(K.cap + 1))


def cmd_rips(args) -> int:
    cloud = io.read_cloud(args.cloud)
    if args.filtration:
        f = rips_filtration(cloud.distance_matrix(), args.alpha, args.cap)
        _write_or_print(args.out, f.to_dict())
        _out(f"simplices {len(f)}")
        return EX_OK
    K = rips_complex(cloud.distance_matrix(), args.alpha, args.cap, strict=args.strict)
    _write_or_print(args.out, K.to_dict())
    _out(_complex_summary(K))
    return EX_OK


def cmd_cech(args) -> int:
    cloud = io.read_cloud(args.cloud)
    if args.filtration:
        f = cech_filtration(cloud, args.alpha, args.cap)
        _write_or_print(args.out, f.to_dict())
        _out(f"simplices {len(f)}")
        return EX_OK
    K = cech_complex(cloud, args.alpha, args.cap)
    _write_or_print(args.out, K.to_dict())
    _out(_complex_summary(K))
    return EX_OK


def _write_or_print(path, obj) -> None:
    if path:
        io.write_json(path, obj)


def cmd_deps(args) -> int:
    cloud = io.read_cloud(args.cloud)
    g = build_eps_graph(cloud, args.eps)
    m = compute_d_eps(g)
    line = f"components {g.components()}"
    if args.out:
        io.write_metric(args.out, m.matrix)
        _out(line)
    else:
        for row in metric_to_csv_rows(m.matrix):
            _out(row)
        print(line, file=sys.stderr)
    return EX_OK


def _validate(theorem: str, dh, eps, delta, rho, b) -> None:
    missing = [n for n, v in (("--dh", dh), ("--delta", delta)) if v is None]
    if theorem in ("rips", "cech", "fundamental") and rho is None:
        missing.append("--rho")
    if theorem == "graph" and b is None:
        missing.append("--b")
    if missing:
        raise UsageError(f"theorem {theorem} needs {', '.join(missing)}")
    chk = check_sampling(theorem, dh, eps, delta, rho=rho, b=b)
    _out(chk.report())
    if not chk.passed:
        raise ValidationFailure(chk.failure)


def cmd_persist(args) -> int:
    spec = _shape(args)
    if args.theorem:
        if args.eps is None:
            raise UsageError("--theorem needs --eps")
        if args.query:
            raise UsageError("--query and --theorem are exclusive")
        if args.filtration != args.theorem:
            if args.filtration_given:
                raise UsageError(f"--theorem {args.theorem} runs on the {args.theorem} filtration")
            args.filtration = args.theorem
        delta, rho, b = _constants(args, spec)
        # preconditions first: nothing below runs when they fail
        _validate(args.theorem, args.dh, args.eps, delta, rho, b)
        s, t = theorem_scales(args.theorem, args.eps, delta)
        alpha_max = t
    else:
        if args.alpha_max is None:
            raise UsageError("persist needs --alpha-max (or --theorem)")
        alpha_max = args.alpha_max
        if args.query:
            s, t = args.query[1], args.query[2]
            if s > t or t > alpha_max:
                raise UsageError("query needs s <= t <= alpha-max")
    cloud = io.read_cloud(args.cloud)
    if args.filtration == "rips":
        f = rips_filtration(cloud.distance_matrix(), alpha_max, args.cap)
    elif args.filtration == "cech":
        f = cech_filtration(cloud, alpha_max, args.cap)
    else:
        if args.eps is None:
            raise UsageError("intrinsic-rips needs --eps")
        M = d_eps_metric(cloud, args.eps).matrix
        f = rips_filtration(M, alpha_max, args.cap)
    d = compute_persistence(f)
    if args.out:
        io.write_lines(args.out, d.to_lines())
    if args.theorem:
        _out(f"scales {fmt(s)} {fmt(t)}")
        for k in range(args.cap):
            _out(f"beta{k} {persistent_betti(d, k, s, t)}")
    elif args.query:
        k = int(args.query[0])
        if k != args.query[0] or k < 0:
            raise UsageError("query dimension must be a non-negative integer")
        _out(str(persistent_betti(d, k, args.query[1], args.query[2])))
    elif not args.out:
        for line in d.to_lines():
            _out(line)
    return EX_OK


def cmd_betti(args) -> int:
    if args.complex:
        K = SimplicialComplex.from_dict(io.read_json(args.complex))
    else:
        if args.cloud is None or args.alpha is None:
            raise UsageError("betti needs --complex, or --cloud with --alpha")
        cloud = io.read_cloud(args.cloud)
        if args.eps is not None:
            M = d_eps_metric(cloud, args.eps).matrix
        else:
            M = cloud.distance_matrix()
        K = rips_complex(M, args.alpha, args.cap)
    top = K.cap - 1 if K.cap > 0 else 0
    for k in range(top + 1):
        _out(f"beta{k} {betti(K, k)}")
    return EX_OK


def cmd_reconstruct(args) -> int:
    spec = _shape(args)
    cloud = io.read_cloud(args.cloud)
    if cloud.dim != 2:
        raise ValidationFailure(f"graph reconstruction needs planar points, got dimension {cloud.dim}")
    if args.dh is not None:
        if spec is None:
            raise UsageError("--dh needs --shape or --spec to validate against")
        _, _, b = _constants(args, spec)
        _validate("graph", args.dh, args.eps, args.delta, None, b)
    if args.resolution is not None and not args.resolution > 0:
        raise UsageError("--resolution must be positive")
    shadow, report = run_reconstruction(cloud, args.eps, args.delta, spec, args.dh, args.resolution)
    if args.out:
        io.write_json(args.out, shadow.to_dict())
    if args.report:
        io.write_json(args.report, report.to_dict())
    if args.svg:
        export_svg(shadow, spec, args.svg)
    _out(f"beta0 {report.beta0}")
    _out(f"beta1 {report.beta1}")
    _out(f"scales {fmt(report.eps)} {fmt(report.threshold)}")
    _out(f"cells {report.n_points} {report.n_segments} {report.n_triangles}")
    if report.hausdorff_estimate is not None:
        _out(f"hausdorff {fmt(report.hausdorff_estimate)} resolution {fmt(report.resolution)} "
             f"bound {fmt(report.hausdorff_bound)}")
    if report.expected_betti is not None:
        ok = report.betti_ok and report.hausdorff_ok
        _out(f"expected {report.expected_betti[0]} {report.expected_betti[1]} {'ok' if ok else 'MISMATCH'}")
    return EX_OK


def cmd_validate(args) -> int:
    spec = _shape(args)
    delta, rho, b = _constants(args, spec)
    _validate(args.theorem, args.dh, args.eps, delta, rho, b)
    return EX_OK


def cmd_render(args) -> int:
    spec = _shape(args)
    shadow = ShadowComplex.from_dict(io.read_json(args.shadow))
    if shadow.points.ndim != 2 or (len(shadow.points) and shadow.points.shape[1] != 2):
        raise ValidationFailure("only planar shadows can be rendered")
    export_svg(shadow, spec, args.out)
    return EX_OK


# --------------------------------------------------------------------------


def _positive(x: str) -> float:
    v = float(x)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {x}")
    return v


def _nonneg(x: str) -> float:
    v = float(x)
    if not (v >= 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {x}")
    return v


def _count(x: str) -> int:
    v = int(x)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {x}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="georecon", description="Reconstruction of shapes from point samples.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sample", help="sample a shape; prints the certified Hausdorff bound")
    _add_shape_args(s)
    s.add_argument("--n", type=_count, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--noise", type=_nonneg, default=0.0)
    s.add_argument("--clearance", type=_positive, help="leave this arc length free around every node")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    for name, fn in (("rips", cmd_rips), ("cech", cmd_cech)):
        c = sub.add_parser(name, help=f"{name} complex (or filtration) of a cloud")
        c.add_argument("--cloud", required=True)
        c.add_argument("--alpha", type=_nonneg, required=True, help="scale (or maximum scale)")
        c.add_argument("--cap", type=int, default=2)
        c.add_argument("--filtration", action="store_true", help="write the filtration up to --alpha")
        if name == "rips":
            c.add_argument("--strict", action="store_true", help="diameter < alpha instead of <=")
        c.add_argument("--out")
        c.set_defaults(func=fn)

    d = sub.add_parser("deps", help="shortest-path metric of the eps-neighbourhood graph")
    d.add_argument("--cloud", required=True)
    d.add_argument("--eps", type=_positive, required=True)
    d.add_argument("--out")
    d.set_defaults(func=cmd_deps)

    q = sub.add_parser("persist", help="persistence barcode and persistent Betti numbers")
    q.add_argument("--cloud", required=True)
    q.add_argument("--filtration", choices=["rips", "cech", "intrinsic-rips"], default=None)
    q.add_argument("--alpha-max", type=_nonneg)
    q.add_argument("--cap", type=int, default=2)
    q.add_argument("--query", type=float, nargs=3, metavar=("K", "S", "T"))
    q.add_argument("--theorem", choices=["rips", "cech"])
    q.add_argument("--eps", type=_positive)
    q.add_argument("--delta", type=float)
    q.add_argument("--rho", type=_positive)
    q.add_argument("--dh", type=_nonneg, help="certified Hausdorff bound of the sample")
    q.add_argument("--out")
    _add_shape_args(q)
    q.set_defaults(func=cmd_persist)

    b = sub.add_parser("betti", help="Betti numbers of a complex")
    b.add_argument("--complex")
    b.add_argument("--cloud")
    b.add_argument("--alpha", type=_nonneg)
    b.add_argument("--eps", type=_positive, help="use the d_eps metric instead of Euclidean")
    b.add_argument("--cap", type=int, default=2)
    b.set_defaults(func=cmd_betti)

    r = sub.add_parser("reconstruct", help="shadow reconstruction of a planar graph")
    r.add_argument("--cloud", required=True)
    r.add_argument("--eps", type=_positive, required=True)
    r.add_argument("--delta", type=float, required=True)
    r.add_argument("--b", type=_positive)
    r.add_argument("--dh", type=_nonneg, help="certified Hausdorff bound; validates the sampling condition")
    r.add_argument("--resolution", type=float)
    r.add_argument("--out")
    r.add_argument("--report")
    r.add_argument("--svg")
    _add_shape_args(r)
    r.set_defaults(func=cmd_reconstruct)

    v = sub.add_parser("validate", help="check a theorem's sampling condition")
    v.add_argument("--theorem", choices=["rips", "cech", "graph", "fundamental"], required=True)
    v.add_argument("--eps", type=_positive, required=True)
    v.add_argument("--dh", type=_nonneg, required=True)
    v.add_argument("--delta", type=float)
    v.add_argument("--rho", type=_positive)
    v.add_argument("--b", type=_positive)
    _add_shape_args(v)
    v.set_defaults(func=cmd_validate)

    w = sub.add_parser("render", help="draw a shadow as SVG")
    w.add_argument("--shadow", required=True)
    w.add_argument("--out", required=True)
    _add_shape_args(w)
    w.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "persist":
        args.filtration_given = args.filtration is not None
        if args.filtration is None:
            args.filtration = args.theorem or "rips"
    try:
        return args.func(args)
    except UsageError as e:
        print(f"georecon {args.command}: usage: {e}", file=sys.stderr)
        return EX_USAGE
    except ValidationFailure as e:
        print(str(e), file=sys.stderr)
        return EX_FAIL
    except (OSError, io.FormatError) as e:
        print(f"georecon {args.command}: {e}", file=sys.stderr)
        return EX_IOERR
    except ValueError as e:
        print(f"georecon {args.command}: {e}", file=sys.stderr)
        return EX_FAIL


if __name__ == "__main__":
    sys.exit(main())
