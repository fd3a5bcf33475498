"""Command-line front end.

    regcomplex list [--mirror i,j] [--skeletons]
    regcomplex build NAME [-o DIR]
    regcomplex verify (NAME ... | --all) [--jobs N] [--fail-fast]
    regcomplex apply NAME OP ELEMENT [--as NEW]
    regcomplex vertex-figure NAME
    regcomplex special-group NAME

Common options: --catalog PATH, --box a:b[,a:b,a:b] (default -3:3),
--scale a (default 1), --format text|json, --jobs N, -o PATH.

Exit status: 0 on success, 1 if any verification check fails, 2 on input
errors (unknown entry, bad box, invalid element, catalog errors).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import catalog as catalog_mod
from . import gen_ops, verify
from .exact_geometry import GeometryError, fmt_rational, fmt_vec
from .lattices import Box
from .point_groups import closure, identify, special_group
from .wythoff import (
    WythoffError,
    build_complex,
    dumps,
    identify_vertex_figure,
    sidecar,
    to_off,
    vertex_figure,
)

DEFAULT_BOX = "-3:3"


class UsageError(Exception):
    pass


def parse_box(text: str) -> Box:
    parts = text.split(",")
    if len(parts) == 1:
        parts *= 3
    if len(parts) != 3:
        raise UsageError(f"box {text!r}: give a:b or three comma-separated a:b ranges")
    out = []
    for p in parts:
        try:
            lo, hi = (int(x) for x in p.split(":"))
        except ValueError:
            raise UsageError(f"box range {p!r} is not of the form a:b with integers") from None
        if lo >= hi:
            raise UsageError(f"degenerate box range {p!r}: need a < b")
        out.append((lo, hi))
    return tuple(out)


def parse_scale(text: str) -> Fraction:
    try:
        a = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"scale {text!r} is not a rational number") from None
    if a <= 0:
        raise UsageError("scale must be positive")
    return a


def parse_mirror(text: str) -> tuple[int, int]:
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"mirror vector {text!r}: expected i,j") from None
    return i, j


def _catalog(args) -> catalog_mod.Catalog:
    if args.catalog:
        return catalog_mod.load(args.catalog)
    return catalog_mod.default_catalog()


def _emit(args, text: str, data) -> None:
    if args.format == "json":
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print(text)


# ---------------------------------------------------------------- subcommands


def cmd_list(args) -> int:
    cat = _catalog(args)
    mirror = parse_mirror(args.mirror) if args.mirror else None
    entries = cat.select(mirror, True if args.skeletons else None)
    rows = []
    for e in entries:
        x = e.expected
        rows.append(
            {
                "name": e.name,
                "title": e.title,
                "mirror_vector": e.mirror_vector if e.is_skeleton else list(e.mirror_vector),
                "source": e.kind,
                "g2": x.g2 if x else None,
                "r": x.r if x else None,
                "face": x.face if x else None,
                "vertex_figure": x.vertex_figure if x else None,
                "vertex_set": x.vertex_set if x else None,
                "special_group": x.special_group if x else None,
            }
        )
    cols = ["name", "mirror_vector", "g2", "r", "face", "vertex_figure", "vertex_set", "special_group", "source"]
    table = [[_cell(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(t[i]) for t in table)) if table else len(c) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(t, widths)) for t in table]
    lines.append(f"{len(rows)} entries")
    _emit(args, "\n".join(lines), rows)
    return 0


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, list):
        return "(" + ",".join(str(x) for x in v) + ")"
    return str(v)


def cmd_build(args) -> int:
    cat = _catalog(args)
    box = parse_box(args.box)
    scale = parse_scale(args.scale)
    entry = cat.entry(args.name)
    gs = cat.resolve(entry.name)
    cr = build_complex(gs, box, require_base=args.require_base)
    out = Path(args.output or ".")
    out.mkdir(parents=True, exist_ok=True)
    off_path = out / f"{entry.name}.off"
    side_path = out / f"{entry.name}.json"
    off_text = to_off(cr, scale)
    off_path.write_text(off_text)
    meta = {
        "entry": entry.name,
        "title": entry.title,
        "scale": fmt_rational(scale),
        "base_face": cr.base_face.printed(),
        "generators": gs.to_json(),
    }
    side_path.write_text(dumps(sidecar(cr, meta, scale)) + "\n")
    n_finite = sum(1 for f in cr.faces.values() if f.period is None)
    summary = {
        "entry": entry.name,
        "box": [list(b) for b in box],
        "scale": fmt_rational(scale),
        "vertices": len(cr.vertices),
        "edges": len(cr.edges),
        "finite_faces": n_finite,
        "infinite_faces": len(cr.faces) - n_finite,
        "off_polygons": int(off_text.split("\n")[1].split()[1]),
        "off": str(off_path),
        "sidecar": str(side_path),
    }
    text = (
        f"{entry.name}: {summary['vertices']} vertices, {summary['edges']} edges, "
        f"{n_finite} finite ({summary['off_polygons']} inside the box) and {summary['infinite_faces']} infinite faces "
        f"-> {off_path}, {side_path}"
    )
    _emit(args, text, summary)
    return 0


def _verify_one(catalog_path, name: str, box: Box, scale: str) -> dict:
    cat = catalog_mod.load(catalog_path) if catalog_path else catalog_mod.default_catalog()
    rep = verify.verify_entry(name, box, cat)
    rep.scale = scale
    return rep.to_json() | {"_text": rep.to_text()}


def cmd_verify(args) -> int:
    cat = _catalog(args)
    box = parse_box(args.box)
    scale = fmt_rational(parse_scale(args.scale))
    if args.all:
        names = cat.names()
    elif args.names:
        names = list(args.names)
        for n in names:
            cat.entry(n)
    else:
        raise UsageError("verify needs entry names or --all")
    results: list[dict] = []
    jobs = max(1, args.jobs or 1)
    if jobs == 1 or len(names) == 1:
        cache = verify.RegionCache(cat)
        for n in names:
            rep = verify.verify_entry(n, box, cat, cache)
            rep.scale = scale
            results.append(rep.to_json() | {"_text": rep.to_text()})
            if args.format == "text":
                print(results[-1]["_text"], flush=True)
            if args.fail_fast and not rep.passed:
                break
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_verify_one, args.catalog, n, box, scale) for n in names]
            for fut in futures:
                res = fut.result()
                results.append(res)
                if args.format == "text":
                    print(res["_text"], flush=True)
                if args.fail_fast and not res["passed"]:
                    for f in futures:
                        f.cancel()
                    break
    n_fail = sum(1 for r in results if not r["passed"])
    reports = [{k: v for k, v in r.items() if k != "_text"} for r in results]
    if args.output:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        for r, full in zip(reports, results):
            (out / f"{r['entry']}.report.json").write_text(json.dumps(r, sort_keys=True, indent=2) + "\n")
            (out / f"{r['entry']}.report.txt").write_text(full["_text"] + "\n")
    summary = f"{len(results)} reports, {len(results) - n_fail} passed, {n_fail} failed"
    if args.format == "json":
        print(json.dumps({"box": [list(b) for b in box], "scale": scale, "reports": reports, "summary": summary}, sort_keys=True, indent=2))
    else:
        failed = [r["entry"] for r in results if not r["passed"]]
        print(summary + (f": {', '.join(failed)}" if failed else ""))
    return 1 if n_fail else 0


def cmd_apply(args) -> int:
    cat = _catalog(args)
    gs = cat.resolve(cat.entry(args.name).name)
    new = catalog_mod.apply_operation(gs, args.op, args.element)
    new_name = args.as_name or f"{args.name}_{args.op}_{args.element}".replace("*", "_")
    frag = catalog_mod.fragment(new_name, new, None, f"{args.name}^{args.op}({args.element})")
    text = json.dumps(frag, sort_keys=True, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
        if args.format == "text":
            print(f"wrote {new_name} to {args.output}")
            return 0
    sys.stdout.write(text)
    return 0


def cmd_vertex_figure(args) -> int:
    cat = _catalog(args)
    box = parse_box(args.box)
    gs = cat.resolve(cat.entry(args.name).name)
    cr = build_complex(gs, box)
    o = gs.base_vertex
    vf = vertex_figure(cr, o)
    rel, edges = vf.relative()
    label = identify_vertex_figure(vf)
    group = identify(closure([g.linear for g in gen_ops.vertex_figure_group(gs)])).name
    data = {
        "entry": args.name,
        "vertex": [fmt_rational(c) for c in o],
        "label": label,
        "vertex_figure_group": group,
        "neighbors": sorted([fmt_rational(c) for c in p] for p in rel),
        "edges": sorted([[fmt_rational(c) for c in u], [fmt_rational(c) for c in w], k] for (u, w), k in edges.items()),
    }
    lines = [f"{args.name}: vertex-figure at {fmt_vec(o)} is {label or 'unrecognized'}; group {group}"]
    lines.append("neighbours: " + " ".join(sorted(fmt_vec(p) for p in rel)))
    for (u, w), k in sorted(edges.items()):
        lines.append(f"  {fmt_vec(u)} -- {fmt_vec(w)}" + (f"  x{k}" if k > 1 else ""))
    _emit(args, "\n".join(lines), data)
    return 0


def cmd_special_group(args) -> int:
    cat = _catalog(args)
    gs = cat.resolve(cat.entry(args.name).name)
    g = special_group(gs.generators)
    lab = identify(g)
    data = {"entry": args.name, "special_group": lab.name, "order": g.order, "edge_stabilizer": gs.edge_stabilizer().label()}
    _emit(args, f"{args.name}: special group {lab.name} (order {g.order}), G2 {data['edge_stabilizer']}", data)
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalog", help="catalog JSON file (default: embedded catalog)")
    common.add_argument("--box", default=DEFAULT_BOX, help="a:b or a:b,c:d,e:f in units of a (default %(default)s)")
    common.add_argument("--scale", default="1", help="edge-scale a for exported coordinates (default 1)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers for verify")
    common.add_argument("-o", "--output", help="output directory (build, verify) or file (apply)")

    p = argparse.ArgumentParser(prog="regcomplex", description="Regular polygonal complexes in E^3.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("list", parents=[common], help="list catalog entries")
    s.add_argument("--mirror", help="only entries with this mirror vector, e.g. 1,1")
    s.add_argument("--skeletons", action="store_true", help="only the 2-skeleton entries")
    s.set_defaults(fn=cmd_list)

    s = sub.add_parser("build", parents=[common], help="build a region and export OFF + JSON")
    s.add_argument("name")
    s.add_argument("--require-base", action="store_true", help="fail if the box misses the base vertex")
    s.set_defaults(fn=cmd_build)

    s = sub.add_parser("verify", parents=[common], help="verify entries against expected properties")
    s.add_argument("names", nargs="*")
    s.add_argument("--all", action="store_true")
    s.add_argument("--fail-fast", action="store_true")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("apply", parents=[common], help="apply lambda0, lambda1 or petrie_lambda")
    s.add_argument("name")
    s.add_argument("op", choices=catalog_mod.OPS)
    s.add_argument("element", help="element name, selector (halfturn, perp_R0, perp_R1) or product A*B")
    s.add_argument("--as", dest="as_name", help="name of the new entry")
    s.set_defaults(fn=cmd_apply)

    s = sub.add_parser("vertex-figure", parents=[common], help="vertex-figure at the base vertex")
    s.add_argument("name")
    s.set_defaults(fn=cmd_vertex_figure)

    s = sub.add_parser("special-group", parents=[common], help="special group of an entry")
    s.add_argument("name")
    s.set_defaults(fn=cmd_special_group)
    return p


def _join_box(argv: list[str]) -> list[str]:
    # "--box -3:3" would otherwise read the negative bound as an option
    out = []
    it = iter(argv)
    for a in it:
        if a == "--box":
            out.append("--box=" + next(it, ""))
        else:
            out.append(a)
    return out


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(_join_box(sys.argv[1:] if argv is None else list(argv)))
    try:
        return args.fn(args)
    except (
        UsageError,
        catalog_mod.CatalogError,
        gen_ops.GenOpsError,
        verify.VerifyError,
        WythoffError,
        GeometryError,
        OSError,
    ) as exc:
        print(f"regcomplex {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
