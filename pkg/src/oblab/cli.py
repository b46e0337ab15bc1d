"""Command-line client.

Requests run in-process through the service handlers, or against a running
server when --server is given.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from pydantic import ValidationError

from .precision import DEFAULT_DIGITS


def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    env_digits = int(os.environ.get("OBLAB_DIGITS", DEFAULT_DIGITS))
    parser.add_argument("--digits", type=int, default=d(env_digits), help="working precision in decimal digits")
    parser.add_argument("--max-iter", type=int, default=d(10**7), help="orbit iteration cap")
    parser.add_argument("--out", default=d(None), help="write an SVG rendering here")
    parser.add_argument("--json", default=d(None), metavar="FILE", help="write JSON here ('-' for stdout)")
    parser.add_argument("--server", default=d(None), help="base URL of a running oblab service")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oblab", description="Outer billiards on regular polygons.")
    _globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, help):
        s = sub.add_parser(name, help=help)
        _globals(s, suppress=True)
        return s

    s = cmd("web", "sample the singularity web")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--levels", type=int, default=10)
    s.add_argument("--samples", type=int, default=200, help="samples per unit length")
    s.add_argument("--mode", choices=["forward", "inverse", "combined"], default="combined")
    s.add_argument("--extent", type=float, default=12.0)
    s.add_argument("--window", type=float, nargs=4, metavar=("XMIN", "YMIN", "XMAX", "YMAX"))

    s = cmd("family", "scale table and first family")
    s.add_argument("--n", type=int, required=True)

    s = cmd("orbit", "iterate one orbit")
    s.add_argument("--n", type=int, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--point", nargs=2, metavar=("X", "Y"))
    g.add_argument("--tile", help="family or chain tile name, e.g. D or M[2]")
    s.add_argument("--backend", choices=["mp", "float"], default="mp")
    s.add_argument("--steps", type=int, default=200, help="how many steps to report")

    s = cmd("periods", "period formulas or simulated generation tables")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--formula", action="store_true", help="closed forms (N=5 only)")
    s.add_argument("--upto", type=int, default=10)
    s.add_argument("--depth", type=int, default=2)
    s.add_argument("--backend", choices=["mp", "float"], default="mp")

    s = cmd("ring", "ring structure")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--simulate", action="store_true")

    s = cmd("df", "digital filter web")
    s.add_argument("--rho", default="1/14")
    s.add_argument("--levels", type=int, default=20)
    s.add_argument("--samples", type=int, default=200)
    s.add_argument("--rectify", action="store_true")

    s = cmd("quasi", "quasi-regular polygons")
    qs = s.add_subparsers(dest="kind", required=True)
    for name in ("ring2", "riffle", "woven"):
        q = qs.add_parser(name)
        _globals(q, suppress=True)
        if name in ("ring2", "riffle"):
            q.add_argument("--n", type=int, required=True)
        if name == "riffle":
            q.add_argument("--rho", default="0")
        if name == "woven":
            q.add_argument("--k", type=int, required=True)
            q.add_argument("--ratio", required=True)

    s = cmd("verify", "run the acceptance checks")
    s.add_argument("--only", type=int, nargs="*", help="criterion numbers")
    return p


def _request(args) -> tuple[str, dict]:
    base = {"digits": args.digits, "max_iter": args.max_iter}
    svg = args.out is not None
    want_points = args.json is not None
    c = args.command
    if c == "web":
        return c, base | dict(
            n=args.n, levels=args.levels, samples=args.samples, mode=args.mode, extent=args.extent,
            window=args.window, include_points=want_points, svg=svg,
        )
    if c == "family":
        return c, base | dict(n=args.n, svg=svg)
    if c == "orbit":
        return c, base | dict(n=args.n, point=args.point, tile=args.tile, backend=args.backend, record_steps=args.steps, svg=svg)
    if c == "periods":
        return c, base | dict(n=args.n, formula=args.formula, upto=args.upto, depth=args.depth, backend=args.backend)
    if c == "ring":
        return c, base | dict(n=args.n, k=args.k, simulate=args.simulate, svg=svg)
    if c == "df":
        return c, base | dict(rho=args.rho, levels=args.levels, samples=args.samples, rectify=args.rectify,
                              include_points=want_points, svg=svg)
    if c == "quasi":
        return c, base | dict(kind=args.kind, n=getattr(args, "n", None), rho=getattr(args, "rho", None),
                              k=getattr(args, "k", None), ratio=getattr(args, "ratio", None), svg=svg)
    if c == "verify":
        return c, {"criteria": args.only or None}
    raise ValueError(c)


def _call(route: str, payload: dict, server: str | None) -> dict:
    if server:
        import httpx

        r = httpx.post(server.rstrip("/") + "/" + route, json=payload, timeout=None)
        if r.status_code != 200:
            raise RuntimeError(f"server returned {r.status_code}: {r.text}")
        return r.json()
    from .service import ROUTES

    fn, model = ROUTES[route]
    return fn(model(**payload)).model_dump(mode="json")


def _summary(route: str, data: dict) -> str:
    if route == "family":
        lines = [f"N={data['n']} GenScale={data['gen_scale'][:12]} rD={data['r_d'][:12]}"]
        lines += [f"scale[{i}]={s[:12]}" for i, s in enumerate(data["scales"], 1)]
        lines += [f"{t['kind']}{'' if t['index'] is None else '[%d]' % t['index']}: {t['sides']}-gon r={t['radius'][:10]}" for t in data["tiles"]]
        return "\n".join(lines)
    if route == "periods":
        if data.get("d"):
            return "d: " + " ".join(map(str, data["d"])) + "\np: " + " ".join(map(str, data["p"]))
        return "\n".join(f"{r['kind']}[{r['generation']}] {r['period']} ({r['status']})" for r in data["rows"])
    if route == "orbit":
        return f"period={data['period']} termination={data['termination']} winding={data['winding']}\nsteps: {data['steps'][:40]}"
    if route == "ring":
        return f"N={data['n']} ring {data['k']}: {data['count']} tiles, periods {data['periods']}, steps {data['step_sequence']}, winding {data['winding']}"
    if route == "web":
        return f"N={data['n']} {data['mode']} web to level {data['levels']}: {data['point_count']} points"
    if route == "df":
        return f"rho={data['rho']} -> regular {data['polygon']}-gon, step {data['step']}; {data['point_count']} web points"
    if route == "quasi":
        return f"{data['kind']}: {data['sides']} vertices; factors " + ", ".join(f"{f['name']}({f['d']})" for f in data["factors"])
    if route == "verify":
        return "\n".join(
            f"[{'PASS' if r['passed'] else 'FAIL'}] {r['number']:2d} {r['title']}: {r['detail']}" for r in data["results"]
        )
    return json.dumps(data)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    route, payload = _request(args)
    try:
        data = _call(route, payload, args.server)
    except ValidationError as exc:
        parser.error(str(exc))
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    svg = data.pop("svg", None)
    if args.out:
        if svg is None:
            print("error: this command has no SVG rendering", file=sys.stderr)
            return 2
        Path(args.out).write_text(svg)
    if args.json == "-":
        json.dump(data, sys.stdout, indent=1, sort_keys=True)
        sys.stdout.write("\n")
    else:
        if args.json:
            Path(args.json).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")
        print(_summary(route, data))
    if route == "verify":
        return 0 if all(r["passed"] for r in data["results"]) else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
