"""Command-line front end.

Exit codes: 0 success, 1 verdict-negative (rule violations, refutations,
SAT counterexamples), 2 usage errors.  All output is deterministic for a
given spec + flags, independent of the thread count.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import robinson as rob
from . import specio
from .errors import SubsymError, ValidationError
from .language import patch_language
from .lattice import Rect
from .points import AddressablePoint
from .substitution import (
    RectSubstitution,
    Seed,
    corner_fixed,
    corner_fixing_power,
    fixed_seeds,
    is_bijective,
    is_primitive,
    power,
)
from .symmetry import (
    aut_group_description,
    fracture_normal_witness,
    non_axis_fracture_refuter,
    sym_group_report,
)


@dataclass(frozen=True)
class RunConfig:
    """Caps and knobs a CLI invocation runs under."""

    threads: int = 1
    depth_cap: int = 8
    cell_cap: int = 2**26
    output_dir: str | None = None
    render: str = "txt"

    def __post_init__(self) -> None:
        if self.threads < 1 or self.depth_cap < 1 or self.cell_cap < 1:
            raise ValidationError("all run-config caps must be positive")


def _config(args) -> RunConfig:
    threads = args.threads
    if threads is None:
        env = os.environ.get("SUBSYM_THREADS")
        try:
            threads = int(env) if env else 1
        except ValueError:
            threads = 1
    return RunConfig(
        threads=max(1, threads),
        depth_cap=getattr(args, "depth", 8) or 8,
        output_dir=getattr(args, "output", None),
        render=getattr(args, "render", "txt"),
    )


def _threads(args) -> int:
    return _config(args).threads


def _load(spec_arg: str) -> tuple[specio.SubstitutionSpec, RectSubstitution]:
    if spec_arg in specio.BUNDLED and not os.path.exists(spec_arg):
        spec = specio.load_bundled(spec_arg)
    else:
        spec = specio.load_spec_file(spec_arg)
    return spec, specio.build_substitution(spec)


def _write_out(args, data, binary=False) -> None:
    if getattr(args, "output", None):
        mode = "wb" if binary else "w"
        with open(args.output, mode) as f:
            f.write(data)
    else:
        if binary:
            sys.stdout.buffer.write(data)
        else:
            sys.stdout.write(data)


def _perm_to_str(a) -> str:
    signs = "".join("-" if t else "+" for t in a.signs)
    perm = "".join(str(p + 1) for p in a.perm)
    return f"{signs};{perm}"


def cmd_analyze(args) -> int:
    spec, theta = _load(args.spec)
    prim = is_primitive(theta)
    bij = is_bijective(theta)
    print(f"name={spec.name}")
    print(f"dim={spec.dim}")
    print(f"size={','.join(str(s) for s in spec.size)}")
    print(f"alphabet={','.join(spec.alphabet)}")
    if prim.primitive:
        print(f"primitive=yes witness_power={prim.witness_power}")
    else:
        print(f"primitive=no missing_pairs={len(prim.missing)}")
    print(f"bijective={'yes' if bij else 'no'}")
    cycles = fixed_seeds(theta)
    print(f"seed_cycles={len(cycles.cycles)} fixed_seeds={len(cycles.fixed)}")
    if bij:
        m = corner_fixing_power(theta)
        fixed_m = fixed_seeds(power(theta, m))
        print(f"corner_fixing_power={m}")
        print(f"fixed_seeds_after_corner_fixing={len(fixed_m.fixed)}")
    return 0


def cmd_aut(args) -> int:
    _, theta = _load(args.spec)
    desc = aut_group_description(theta)
    print(f"relabel_group_order={desc.relabel_order}")
    print(f"structure={desc.structure}")
    for tau in desc.relabel_group:
        print("tau=" + ",".join(str(t) for t in tau))
    return 0


def cmd_sym(args) -> int:
    _, theta = _load(args.spec)
    report = sym_group_report(theta, depth=args.depth, threads=_threads(args))
    for cand in report.candidates:
        print(f"{_perm_to_str(cand.a)} -> {cand.describe()}")
    print(report.summary_line())
    return 0


def cmd_patch(args) -> int:
    _, theta = _load(args.spec)
    theta_m = power(theta, args.power)
    sym = theta.alphabet.index(args.symbol) if args.symbol else 0
    patch = theta_m.rule(sym)
    if args.render == "txt":
        _write_out(args, specio.render_pattern_text(patch))
    elif args.render == "ppm":
        _write_out(args, specio.render_pattern_ppm(patch, scale=args.scale), binary=True)
    else:
        raise SubsymError(f"unsupported render {args.render!r} for substitution patches")
    return 0


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def cmd_point(args) -> int:
    _, theta = _load(args.spec)
    theta_cf, m = corner_fixed(theta)
    seed_syms = tuple(theta.alphabet.index(nm) for nm in args.seed.split(","))
    seed = Seed(theta.dim, seed_syms)
    shift = _parse_ints(args.shift) if args.shift else (0,) * theta.dim
    x = AddressablePoint(theta_cf, seed, shift)
    r = args.window
    rect = Rect((-r,) * theta.dim, (r - 1,) * theta.dim)
    print(f"corner_fixing_power={m}")
    sys.stdout.write(specio.render_pattern_text(x.window(rect)))
    return 0


def cmd_lang(args) -> int:
    spec, theta = _load(args.spec)
    shape = _parse_ints(args.shape)
    cache_path = None
    if args.cache_dir:
        key = f"{specio.spec_digest(spec)}-{args.shape}-{args.mode}-{args.depth}"
        digest = hashlib.sha256(key.encode()).hexdigest()[:16]
        cache_path = Path(args.cache_dir) / f"lang-{digest}.txt"
        if cache_path.exists():
            _write_out(args, cache_path.read_text())
            return 0
    lang = patch_language(theta, shape, mode=args.mode, max_depth=args.depth)
    dump = specio.dump_language(lang.shape, lang.patterns)
    if cache_path is not None:
        cache_path.parent.mkdir(parents=True, exist_ok=True)
        cache_path.write_text(dump)
    _write_out(args, dump)
    print(
        f"# patterns={len(lang.patterns)} depth={lang.depth_reached} "
        f"stabilized={'yes' if lang.stabilized else 'no'}",
        file=sys.stderr,
    )
    return 0


def cmd_fracture(args) -> int:
    _, theta = _load(args.spec)
    if args.refute:
        v = _parse_ints(args.refute)
        report = non_axis_fracture_refuter(
            theta, v, args.threshold, window=args.window
        )
        if report.conclusive:
            b = report.block
            print(
                f"refuted direction={args.refute} level={b.level} "
                f"block=[{b.block.lo[0]},{b.block.lo[1]}]..[{b.block.hi[0]},{b.block.hi[1]}] "
                f"upper_cells={b.upper_count} lower_cells={b.lower_count}"
            )
            return 0
        print(f"inconclusive: window too small, need about {report.required_window}")
        return 1
    theta_cf, _ = corner_fixed(theta)
    witness = fracture_normal_witness(theta_cf, args.axis, window=args.window)
    print(
        f"axis={args.axis} window={args.window} "
        f"equal_on_upper={'yes' if witness.equal_on_upper else 'no'} "
        f"unequal_on_lower={'yes' if witness.unequal_on_lower else 'no'}"
    )
    return 0 if witness.ok else 1


def _robinson_render(args, patch: rob.RobinsonPatch) -> None:
    if args.render == "txt":
        _write_out(args, rob.save_patch_text(patch))
    elif args.render == "ppm":
        _write_out(args, rob.render_ppm(patch, scale=args.scale), binary=True)
    elif args.render == "svg":
        _write_out(args, rob.render_svg(patch))


def cmd_robinson(args) -> int:
    if args.rob_cmd == "supertile":
        patch = rob.supertile(args.n, args.orient)
    elif args.rob_cmd == "window":
        patch = rob.four_quadrant_window(args.n, args.arm_config)
    elif args.rob_cmd == "fracture":
        patch = rob.fracture_shift_demo(args.n, args.k)
    elif args.rob_cmd == "torus":
        res = rob.torus_tiling_search(
            args.w, args.h, parity=(0, 0), time_cap=args.time_cap
        )
        print(
            f"torus {args.w}x{args.h}: {res.status} "
            f"decisions={res.decisions} elapsed={res.elapsed:.2f}s"
        )
        if res.status == "sat":
            print("counterexample:")
            for y in range(args.h - 1, -1, -1):
                print(
                    " ".join(
                        rob.TILES[res.assignment[x + args.w * y]].token()
                        for x in range(args.w)
                    )
                )
            return 1
        if res.status == "timeout":
            print("inconclusive(timeout)")
        return 0
    elif args.rob_cmd == "verify":
        with open(args.file, "r", encoding="utf-8") as f:
            patch = rob.load_patch_text(f.read())
        violations = rob.verify_patch(patch)
        print(f"violations={len(violations)}")
        for v in violations[:50]:
            print(f"  {v.kind} at {v.at}: {v.detail}")
        return 1 if violations else 0
    else:  # pragma: no cover
        return 2

    violations = rob.verify_patch(patch)
    _robinson_render(args, patch)
    print(f"violations={len(violations)}", file=sys.stderr)
    return 1 if violations else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="subsym",
        description="Substitution subshifts and the Robinson tiling: "
        "analysis, symmetry search, fracture witnesses, renders.",
    )
    ap.add_argument("--threads", type=int, default=None, help="worker threads (or SUBSYM_THREADS)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def spec_arg(p):
        p.add_argument("spec", help="spec file path or bundled name "
                       f"({', '.join(specio.BUNDLED)})")

    p = sub.add_parser("analyze", help="primitivity, bijectivity, corner power, seeds")
    spec_arg(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("aut", help="relabeling automorphism group")
    spec_arg(p)
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("sym", help="extended symmetry report over signed permutations")
    spec_arg(p)
    p.add_argument("--depth", type=int, default=3)
    p.set_defaults(func=cmd_sym)

    p = sub.add_parser("patch", help="render an iterated rule patch")
    spec_arg(p)
    p.add_argument("-m", "--power", type=int, default=1)
    p.add_argument("-a", "--symbol", default=None)
    p.add_argument("--render", choices=("txt", "ppm"), default="txt")
    p.add_argument("--scale", type=int, default=8)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_patch)

    p = sub.add_parser("point", help="window of a lazy fixed point")
    spec_arg(p)
    p.add_argument("--seed", required=True, help="comma-separated symbols, corner order")
    p.add_argument("--shift", default=None, help="comma-separated integers")
    p.add_argument("--window", type=int, default=8, help="radius r: window [-r, r-1]^d")
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("lang", help="patch language dump (extent:hex lines)")
    spec_arg(p)
    p.add_argument("--shape", required=True, help="comma-separated extents")
    p.add_argument("--mode", choices=("minimal", "full"), default="minimal")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--cache-dir", default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_lang)

    p = sub.add_parser("fracture", help="axis fracture witness / non-axis refuter")
    spec_arg(p)
    p.add_argument("--axis", type=int, default=0, help="0-based axis")
    p.add_argument("--refute", default=None, help="non-axis direction vx,vy")
    p.add_argument("--threshold", type=int, default=4)
    p.add_argument("--window", type=int, default=64)
    p.set_defaults(func=cmd_fracture)

    p = sub.add_parser("robinson", help="Robinson tiling commands")
    rsub = p.add_subparsers(dest="rob_cmd", required=True)

    rp = rsub.add_parser("supertile")
    rp.add_argument("n", type=int)
    rp.add_argument("--orient", choices=rob.ORIENTATIONS, default="NE")

    rw = rsub.add_parser("window")
    rw.add_argument("n", type=int)
    rw.add_argument("--arm-config", choices=("vertical", "horizontal"), default="vertical")

    rf = rsub.add_parser("fracture")
    rf.add_argument("n", type=int)
    rf.add_argument("k", type=int)

    rt = rsub.add_parser("torus")
    rt.add_argument("w", type=int)
    rt.add_argument("h", type=int)
    rt.add_argument("--time-cap", type=float, default=60.0)

    rv = rsub.add_parser("verify")
    rv.add_argument("file")

    for rp_ in (rp, rw, rf):
        rp_.add_argument("--render", choices=("txt", "ppm", "svg"), default="txt")
        rp_.add_argument("--scale", type=int, default=8)
        rp_.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_robinson)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SubsymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
