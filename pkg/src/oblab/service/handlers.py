"""Plain functions behind the HTTP routes and the CLI."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from mpmath import mpf

from .. import digital_filter as dfm
from ..family import TileSpec, first_family, scale_table, virtual_chain
from ..geometry import Point, make_regular_ngon
from ..periodicity import generation_table, pentagon_periods, ring_centers, ring_structure
from ..precision import digits_context, exact_str
from ..quasi import QuasiPolygon, riffle_polygon, ring2_polygon, woven_polygon
from ..render import FAMILY_MAGENTA, FORWARD_MAGENTA, GENERATOR_BLACK, INVERSE_BLUE, Layer, RenderSpec, fit_window, svg_text
from ..tangent import iterate_orbit
from ..web import WebConfig, generate_web, survival_rate
from . import models as m


def _pair(p) -> tuple[str, str]:
    return exact_str(p[0]), exact_str(p[1])


def _fpair(p) -> tuple[str, str]:
    return f"{float(p[0]):.17g}", f"{float(p[1]):.17g}"


def tile_to_model(t: TileSpec) -> m.TileModel:
    return m.TileModel(
        kind=t.kind,
        index=t.index,
        center=_pair(t.center),
        radius=exact_str(t.radius),
        sides=t.sides,
        mutation=t.mutation,
        expected_period=t.expected_period,
        virtual=t.virtual,
        woven_radii=_pair(t.woven_radii) if t.woven_radii else None,
    )


def tile_from_model(t: m.TileModel) -> TileSpec:
    return TileSpec(
        t.kind,
        t.index,
        Point(mpf(t.center[0]), mpf(t.center[1])),
        mpf(t.radius),
        t.sides,
        t.mutation,
        t.expected_period,
        t.virtual,
        (mpf(t.woven_radii[0]), mpf(t.woven_radii[1])) if t.woven_radii else None,
    )


def _outline(poly) -> np.ndarray:
    return poly.float_vertices


def family(req: m.FamilyRequest) -> m.FamilyResponse:
    with digits_context(req.digits):
        t = scale_table(req.n)
        tiles = first_family(req.n)
        svg = None
        if req.svg:
            outlines = [_outline(x.polygon()) for x in tiles]
            spec = RenderSpec(fit_window(outlines))
            svg = svg_text([Layer("family", FAMILY_MAGENTA, polygons=outlines)], spec)
        return m.FamilyResponse(
            n=req.n,
            digits=req.digits,
            side=exact_str(t.side),
            gen_scale=exact_str(t.gen_scale),
            gen_star=_pair(t.gen_star),
            r_d=exact_str(t.r_d),
            c_d=_pair(t.c_d),
            scales=[exact_str(s) for s in t.scales],
            star_points=[m.StarModel(k=s.k, location=_pair(s.location)) for s in t.stars],
            tiles=[tile_to_model(x) for x in tiles],
            svg=svg,
        )


def web(req: m.WebRequest) -> m.WebResponse:
    P = make_regular_ngon(req.n)
    cfg = WebConfig(levels=req.levels, samples_per_unit_length=req.samples, extent=req.extent, window=req.window)
    modes = ["forward", "inverse"] if req.mode == "combined" else [req.mode]
    webs = {mode: generate_web(P, cfg, mode) for mode in modes}
    pts = np.vstack([w.points for w in webs.values()])
    labels = [mode for mode, w in webs.items() for _ in range(len(w.points))]
    # survival is a property of the unwindowed seeds
    surv = [survival_rate(next(iter(webs.values())), k) for k in range(req.levels + 1)]
    svg = None
    if req.svg:
        window = req.window or fit_window([P.float_vertices * 3])
        layers = [Layer("generator", GENERATOR_BLACK, polygons=[P.float_vertices])]
        colors = {"inverse": INVERSE_BLUE, "forward": FORWARD_MAGENTA}
        # inverse first so the forward layer draws on top
        for mode in sorted(webs, key=lambda s: s != "inverse"):
            layers.append(Layer(f"{mode}-web", colors[mode], points=webs[mode].points))
        svg = svg_text(layers, RenderSpec(window, point_size=0.4))
    return m.WebResponse(
        n=req.n,
        levels=req.levels,
        mode=req.mode,
        point_count=len(pts),
        survival=surv,
        points=[_fpair(p) for p in pts] if req.include_points else None,
        layers=labels if req.include_points else None,
        svg=svg,
    )


def _named_tile(n: int, name: str) -> TileSpec:
    for t in first_family(n):
        if t.name == name:
            return t
    if n % 2 and name[:2] in ("M[", "D["):
        j = int(name[2:-1])
        for t in virtual_chain(n, max(j, 1)):
            if t.name == name:
                return t
    raise KeyError(f"no tile {name!r} for N={n}")


def orbit(req: m.OrbitRequest) -> m.OrbitResponse:
    with digits_context(req.digits):
        P = make_regular_ngon(req.n)
        if req.tile:
            start = _named_tile(req.n, req.tile).center
        else:
            start = Point(mpf(req.point[0]), mpf(req.point[1]))
        rec = iterate_orbit(P, start, req.max_iter, record_points=req.svg, backend=req.backend)
        w = rec.winding() if rec.period else None
        svg = None
        if req.svg:
            pts = np.array([[float(a), float(b)] for a, b in rec.points] or [start.as_float()])
            spec = RenderSpec(fit_window([pts, P.float_vertices]), point_size=1.5)
            svg = svg_text(
                [Layer("generator", GENERATOR_BLACK, polygons=[P.float_vertices]), Layer("orbit", FORWARD_MAGENTA, points=pts)],
                spec,
            )
        return m.OrbitResponse(
            n=req.n,
            start=_pair(start),
            period=rec.period,
            termination=rec.termination,
            winding=str(w) if w is not None else None,
            steps=rec.step_sequence[: req.record_steps],
            svg=svg,
        )


def periods(req: m.PeriodsRequest) -> m.PeriodsResponse:
    if req.formula:
        if req.n != 5:
            raise ValueError("closed-form period lists exist only for N=5")
        d, p = zip(*(pentagon_periods(k) for k in range(1, req.upto + 1)))
        return m.PeriodsResponse(n=5, d=list(d), p=list(p))
    with digits_context(req.digits):
        tab = generation_table(req.n, req.depth, req.max_iter, req.backend)
    rows = [m.PeriodRow(generation=r.generation, kind=r.kind, period=r.period, status=r.status) for r in tab.rows]
    return m.PeriodsResponse(n=req.n, rows=rows)


def ring(req: m.RingRequest) -> m.RingResponse:
    with digits_context(req.digits):
        spec = ring_structure(req.n, req.k, simulate=req.simulate)
        centers = spec.centers or (ring_centers(req.n, req.k) if req.svg else [])
        svg = None
        if req.svg:
            P = make_regular_ngon(req.n)
            pts = np.array([c.as_float() for c in centers])
            layers = [Layer("generator", GENERATOR_BLACK, polygons=[P.float_vertices]), Layer("ring", FAMILY_MAGENTA, points=pts)]
            svg = svg_text(layers, RenderSpec(fit_window([pts]), point_size=2))
        return m.RingResponse(
            n=req.n,
            k=req.k,
            count=spec.count,
            periods=spec.periods,
            step_sequence=spec.step_sequence,
            winding=str(spec.winding),
            simulated=spec.simulated,
            centers=[_pair(c) for c in centers] if centers else None,
            svg=svg,
        )


def df(req: m.DfRequest) -> m.DfResponse:
    rho = Fraction(req.rho) if "/" in req.rho or req.rho.isdigit() else float(req.rho)
    params = dfm.DfParams(rho)
    web = dfm.df_web(params, req.levels, req.samples)
    pts = web.rectified if req.rectify else web.points
    if params.is_rational:
        poly, step = dfm.rho_to_polygon(params.rho)
    else:
        poly, step = 0, 0
    svg = None
    if req.svg:
        window = fit_window([pts]) if req.rectify else (-1.0, -1.0, 1.0, 1.0)
        svg = svg_text([Layer("df-web", FORWARD_MAGENTA, points=pts)], RenderSpec(window, point_size=0.4))
    return m.DfResponse(
        rho=str(params.rho),
        theta=f"{params.theta:.17g}",
        a=f"{params.a:.17g}",
        polygon=poly,
        step=step,
        point_count=len(pts),
        rectified=req.rectify,
        points=[_fpair(p) for p in pts] if req.include_points else None,
        atoms=[int(a) for a in web.atoms] if req.include_points else None,
        svg=svg,
    )


def _quasi_model(q: QuasiPolygon, svg: bool) -> m.QuasiResponse:
    V = q.polygon.float_vertices
    doc = None
    if svg:
        layers = [Layer("polygon", GENERATOR_BLACK, polygons=[V])]
        for f, color in zip(q.factors, ("#2a9d3a", FAMILY_MAGENTA, INVERSE_BLUE)):
            if f.d >= 3:
                layers.append(Layer(f"factor-{f.name}", color, polygons=[V[list(f.indices)]]))
        doc = svg_text(layers, RenderSpec(fit_window([V])))
    return m.QuasiResponse(
        kind=q.kind,
        sides=q.n,
        vertices=[_pair(v) for v in q.polygon.vertices],
        factors=[
            m.FactorModel(name=f.name, d=f.d, indices=list(f.indices), radius=exact_str(f.radius(q.polygon)))
            for f in q.factors
        ],
        svg=doc,
    )


def quasi(req: m.QuasiRequest) -> m.QuasiResponse:
    with digits_context(req.digits):
        if req.kind == "ring2":
            if req.n is None:
                raise ValueError("ring2 needs n")
            q = ring2_polygon(req.n)
        elif req.kind == "riffle":
            if req.n is None:
                raise ValueError("riffle needs n")
            rho = req.rho or "0"
            q = riffle_polygon(req.n, Fraction(rho) if "/" in rho else mpf(rho))
        else:
            if req.k is None or req.ratio is None:
                raise ValueError("woven needs k and ratio")
            q = woven_polygon(req.k, 1, mpf(req.ratio))
        return _quasi_model(q, req.svg)


def verify(req: m.VerifyRequest) -> m.VerifyResponse:
    from ..acceptance import run_all

    results = run_all(req.criteria)
    return m.VerifyResponse(
        results=[m.CriterionModel(number=r.number, title=r.title, passed=r.passed, detail=r.detail) for r in results]
    )
