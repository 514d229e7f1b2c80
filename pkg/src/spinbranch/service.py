"""FastAPI service around the core package.  Each endpoint is a thin wrapper
over a handler that maps a request model to a Report; the CLI calls the same
handlers in-process or over HTTP."""

from __future__ import annotations

import math
from fractions import Fraction

from fastapi import FastAPI, HTTPException

from . import __version__
from .branching import branch
from .duflo import verify_duflo
from .fourier import BATTERY, f_formula, ft_poisson, gamma_fn, kbessel_tilde, riesz_d, run_battery
from .orbits import (
    OrbitParam,
    make_bpoint,
    moment_image,
    moment_image_point,
    numeric_descriptor,
)
from .repclass import DS, PS, Aq, PiJ, classify_infl_char, irreducibles_with_char, is_unitarizable
from .schemas import (
    AnalysisRequest,
    BranchRequest,
    Check,
    ClassifyRequest,
    DufloRequest,
    OrbitImageRequest,
    RepSpec,
    Report,
    SelfTestRequest,
)
from .weights import Group, dim_spin, fmt, fmt_weight, weight


def num_str(v) -> str:
    """Exact values as "p/q" strings, floats with 15 significant digits."""
    if isinstance(v, (int, Fraction)):
        return fmt(v)
    return format(float(v), ".15g")


def parse_number(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {text!r}") from exc


def parse_nu(text: str):
    """'3/2', '1.2', '2i', '0.5+1.5i' -> Fraction or complex."""
    t = text.strip().replace(" ", "")
    if t.endswith(("i", "j")):
        try:
            z = complex(t.replace("i", "j"))
        except ValueError as exc:
            raise ValueError(f"not a complex number: {text!r}") from exc
        return z if z.imag != 0 else parse_number(str(z.real))
    return parse_number(t)


def _sign(s) -> int:
    if s not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    return 1 if s == "+" else -1


def _need(spec: RepSpec, *names):
    for name in names:
        if getattr(spec, name) is None:
            raise ValueError(f"--rep {spec.rep} needs --{name.replace('_', '-')}")


def build_rep(spec: RepSpec):
    """Representation label from a RepSpec."""
    g = Group(spec.m)
    if spec.rep == "ds":
        _need(spec, "gamma", "sign")
        if not g.odd:
            raise ValueError("discrete series exist only for odd m")
        ic = classify_infl_char(weight(spec.gamma), g)
        if ic.cls not in ("Lambda0", "LambdaN"):
            raise ValueError(f"gamma is of class {ic.cls}; discrete series need Lambda0 or LambdaN")
        return DS(ic, _sign(spec.sign))
    if spec.rep == "pij":
        _need(spec, "gamma", "j")
        ic = classify_infl_char(weight(spec.gamma), g)
        if ic.cls != "Lambda0" or not 0 <= spec.j < g.n:
            raise ValueError("pi_j needs gamma in Lambda0 and 0 <= j <= n-1")
        return PiJ(ic, spec.j)
    if spec.rep == "ps":
        _need(spec, "mu", "nu")
        return PS(weight(spec.mu), parse_nu(spec.nu), spec.m)
    _need(spec, "j", "lam")
    return Aq(spec.j, weight(spec.lam), spec.m)


def label(rep) -> str:
    if isinstance(rep, PS):
        nu = rep.nu
        nu_s = (f"{nu.imag:g}i" if nu.real == 0 else f"{nu.real:g}+{nu.imag:g}i") if isinstance(nu, complex) else num_str(nu)
        return f"PS(({','.join(fmt_weight(rep.mu))}), nu={nu_s})"
    if isinstance(rep, Aq):
        return f"Aq({rep.j}, ({','.join(fmt_weight(rep.lam))}))"
    return str(rep)


# ---------------------------------------------------------------- handlers

def handle_classify(req: ClassifyRequest) -> Report:
    g = Group(req.m)
    ic = classify_infl_char(weight(req.gamma), g)
    irr = [{"label": label(r), "unitarizable": is_unitarizable(r)} for r in irreducibles_with_char(ic)]
    result = {"gamma": fmt_weight(ic.gamma), "class": ic.cls, "j": ic.j, "irreducibles": irr}
    return Report(command="classify", request=req.model_dump(), result=result)


def handle_branch(req: BranchRequest) -> Report:
    rep = build_rep(req)
    table = branch(rep)
    result = {"rep": label(rep), "components": [{"tau": fmt_weight(t)} for t in table.components]}
    checks = []
    if isinstance(rep, PS):
        g = Group(req.m)
        lhs = dim_spin(rep.mu, g.m)
        rhs = sum(dim_spin(t, g.m - 1) for t in table.components)
        checks.append(Check(name="dimension", passed=lhs == rhs, residual=float(lhs - rhs)))
    return Report(command="branch", request=req.model_dump(), result=result, checks=checks,
                  ok=all(c.passed for c in checks))


def handle_orbit_image(req: OrbitImageRequest) -> Report:
    o = OrbitParam(req.kind, tuple(parse_number(x) for x in req.a), req.m, _sign(req.sign))
    img = moment_image(o)
    result: dict = {"orbit": o.describe(), "family": o.kind, "pf": img.pf_rule,
                    "depth0": list(img.depth0_labels), "open": {}}
    if img.depth_one:
        for i, iv in enumerate(img.intervals, start=1):
            result[f"x{i}"] = [num_str(iv.lo), num_str(iv.hi)]
            if iv.lo_open or iv.hi_open:
                result["open"][f"x{i}"] = [iv.lo_open, iv.hi_open]
    checks = []
    if req.b is not None:
        bp = make_bpoint(o, req.b, req.tol)
        closed = moment_image_point(o, bp)
        numeric = numeric_descriptor(o, bp)
        dx = max((abs(u - v) for u, v in zip(closed.x, numeric.x)), default=0.0)
        result["point"] = {"x": [num_str(v) for v in closed.x], "pf": closed.pf_sign,
                           "numeric_x": [num_str(v) for v in numeric.x], "numeric_pf": numeric.pf_sign}
        checks.append(Check(name="closed-vs-pipeline", passed=dx <= req.tol and closed.pf_sign == numeric.pf_sign,
                            residual=float(dx)))
        checks.append(Check(name="in-image", passed=img.contains(closed, req.tol), residual=None))
    return Report(command="orbit-image", request=req.model_dump(), result=result, checks=checks,
                  ok=all(c.passed for c in checks))


def handle_duflo(req: DufloRequest) -> Report:
    rep = build_rep(req)
    rpt = verify_duflo(rep, parse_number(req.bound), req.singleton_samples, seed=req.seed)
    o = rpt.orbit
    result = {
        "rep": label(rep),
        "orbit": {"kind": o.kind, "a": [num_str(x) for x in o.a], "sign": o.sign, "tag": o.tag},
        "matched": rpt.matched,
        "candidates": rpt.candidates,
        "branch_set": [fmt_weight(t) for t in sorted(rpt.branch_set)],
        "orbit_set": [fmt_weight(t) for t in sorted(rpt.orbit_set)],
        "mismatches": [{"tau": fmt_weight(t), "in_branch": b, "in_image": i} for t, b, i in rpt.mismatches],
        "singleton": rpt.singleton,
    }
    checks = [Check(name="branching-equals-image", passed=rpt.matched, residual=float(len(rpt.mismatches)))]
    if rpt.singleton is not None:
        checks.append(Check(name="reduced-space-singleton", passed=rpt.singleton, residual=None))
    return Report(command="duflo-verify", request=req.model_dump(), result=result, checks=checks,
                  ok=all(c.passed for c in checks))


def handle_analysis(req: AnalysisRequest) -> Report:
    names = tuple(req.checks) if req.checks else BATTERY
    res = run_battery(names, req.tolerances, req.side, req.half_width, req.seed)
    checks = [Check(name=r.name, passed=r.passed, residual=r.residual) for r in res]
    passed = sum(c.passed for c in checks)
    return Report(command="analysis-verify", request=req.model_dump(),
                  result={"passed": passed, "failed": len(checks) - passed}, checks=checks,
                  ok=passed == len(checks))


def _self_checks(seed: int) -> list[Check]:
    out = []

    def add(name, ok, residual=None):
        out.append(Check(name=name, passed=bool(ok), residual=None if residual is None else float(residual)))

    g3 = Group(3)
    for gm, cls in (((Fraction(3, 2), Fraction(1, 2)), "Lambda0"), ((Fraction(3, 2), Fraction(3, 2)), "LambdaJ")):
        add(f"classify {fmt_weight(gm)}", classify_infl_char(gm, g3).cls == cls)
    rep = build_rep(RepSpec(m=3, rep="ds", gamma=["3/2", "1/2"], sign="-"))
    add("branch ds(-) rho, m=3", [fmt_weight(t) for t in branch(rep).components] == [["1"]])
    img = handle_orbit_image(OrbitImageRequest(m=3, kind="elliptic", a=["2", "1"])).result
    add("orbit-image elliptic (2,1)", img.get("x1") == ["1", "2"] and img["pf"] == "+")
    add("duflo ds(-) rho, m=3", verify_duflo(rep, 5).matched)
    add("gamma(1/2)^2 = pi", abs(gamma_fn(0.5) ** 2 - math.pi) < 1e-12, gamma_fn(0.5) ** 2 - math.pi)
    k = kbessel_tilde(0.5, 1.3) / (math.sqrt(math.pi) / 2 * math.exp(-1.3)) - 1
    add("K~_1/2 closed form", abs(k) < 1e-12, k)
    d = riesz_d(2, 3) / (2 ** -0.5 * math.sqrt(math.pi)) - 1
    add("riesz_d(2, 3)", abs(d) < 1e-12, d)
    p = ft_poisson(-2, 3, 1.1) / f_formula(1, [0, 0, 1.1], 2) - 1
    add("ft_poisson vs F-formula 1", abs(p) < 1e-12, p)
    for r in run_battery(("algebra", "kbessel"), seed=seed):
        add(r.name, r.passed, r.residual)
    return out


def handle_self_test(req: SelfTestRequest) -> Report:
    checks = _self_checks(req.seed)
    passed = sum(c.passed for c in checks)
    return Report(command="self-test", request=req.model_dump(),
                  result={"passed": passed, "failed": len(checks) - passed}, checks=checks,
                  ok=passed == len(checks))


HANDLERS = {
    "classify": (ClassifyRequest, handle_classify),
    "branch": (BranchRequest, handle_branch),
    "orbit-image": (OrbitImageRequest, handle_orbit_image),
    "duflo-verify": (DufloRequest, handle_duflo),
    "analysis-verify": (AnalysisRequest, handle_analysis),
    "self-test": (SelfTestRequest, handle_self_test),
}


def dispatch(command: str, payload: dict) -> Report:
    model, fn = HANDLERS[command]
    return fn(model.model_validate(payload))


# ---------------------------------------------------------------- HTTP app

def create_app() -> FastAPI:
    app = FastAPI(title="spinbranch", version=__version__)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    def route(fn):
        def endpoint(req):
            try:
                return fn(req)
            except (ValueError, TypeError) as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
        return endpoint

    for name, (model, fn) in HANDLERS.items():
        ep = route(fn)
        ep.__annotations__ = {"req": model, "return": Report}
        ep.__name__ = name.replace("-", "_")
        app.post(f"/{name}", response_model=Report, response_model_by_alias=True)(ep)
    return app


app = create_app()
