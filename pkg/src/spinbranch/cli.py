"""Command-line client.  Builds a request model, runs it through the shared
service handlers (in-process, or against a running service with --url) and
prints the report as JSON, CSV or text.

Exit codes: 0 success, 1 verification mismatch, 2 usage error."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from pydantic import ValidationError

from .schemas import REQUESTS, Report

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


def _tuple(text: str) -> list[str]:
    text = text.strip().strip("()[]")
    return [t.strip() for t in text.split(",")] if text else []


def _floats(text: str) -> list[float]:
    return [float(t) for t in _tuple(text)]


def _tol_pair(text: str) -> tuple[str, float]:
    name, _, val = text.partition("=")
    if not val:
        raise argparse.ArgumentTypeError("expected NAME=VALUE")
    return name.strip(), float(val)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--output", choices=("json", "csv", "text"), default="json")
    p.add_argument("--url", help="send the request to a running service instead of computing in-process")


def _add_rep(p: argparse.ArgumentParser):
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--rep", choices=("ds", "pij", "ps", "aq"), required=True)
    p.add_argument("--gamma", type=_tuple, help="infinitesimal character, e.g. 3/2,1/2")
    p.add_argument("--sign", choices=("+", "-"))
    p.add_argument("--j", type=int)
    p.add_argument("--mu", type=_tuple)
    p.add_argument("--nu", help="coefficient of lambda_0: 3/2, 1.2, 2i, ...")
    p.add_argument("--lam", type=_tuple)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spinbranch", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify an infinitesimal character")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--gamma", type=_tuple, required=True)
    _add_common(p)

    p = sub.add_parser("branch", help="branching law pi|_P")
    _add_rep(p)
    _add_common(p)

    p = sub.add_parser("orbit-image", help="moment-map image of a coadjoint orbit")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--kind", required=True, help="elliptic, nonelliptic, nonsemisimple or zero")
    p.add_argument("--a", type=_tuple, required=True)
    p.add_argument("--sign", choices=("+", "-"), default="+", help="+U or -U for nonsemisimple")
    p.add_argument("--b", type=_floats, help="optional b-point to push through the moment map")
    p.add_argument("--tol", type=float, default=1e-9)
    _add_common(p)

    p = sub.add_parser("duflo-verify", help="branching set vs moment-image set")
    _add_rep(p)
    p.add_argument("--bound", required=True, help="candidate bound on |tau_i|")
    p.add_argument("--singleton-samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)

    p = sub.add_parser("analysis-verify", help="Fourier-analytic verification battery")
    p.add_argument("--check", action="append", dest="checks",
                   help="poisson, riesz, f_formulas, convolution, dft, kbessel or algebra (repeatable)")
    p.add_argument("--side", type=int, default=64)
    p.add_argument("--half-width", type=float, default=12.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="NAME=VALUE")
    _add_common(p)

    p = sub.add_parser("self-test", help="quick end-to-end checks")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    return ap


def request_payload(args: argparse.Namespace) -> dict:
    skip = {"command", "output", "url", "tol"} if args.command == "analysis-verify" else {"command", "output", "url"}
    payload = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    if args.command == "analysis-verify":
        payload["tolerances"] = dict(args.tol)
    return payload


def _remote(url: str, command: str, payload: dict) -> Report:
    import httpx

    resp = httpx.post(f"{url.rstrip('/')}/{command}", json=payload, timeout=600)
    if resp.status_code == 422:
        raise ValueError(json.dumps(resp.json().get("detail")))
    resp.raise_for_status()
    return Report.model_validate(resp.json())


def render_json(report: Report) -> str:
    return json.dumps(report.model_dump(by_alias=True), indent=2)


def _rows(report: Report) -> tuple[list[str], list[list]]:
    r = report.result
    cmd = report.command
    if cmd == "classify":
        return ["label", "unitarizable"], [[i["label"], i["unitarizable"]] for i in r["irreducibles"]]
    if cmd == "branch":
        width = max((len(c["tau"]) for c in r["components"]), default=0)
        return [f"tau{i + 1}" for i in range(width)], [c["tau"] for c in r["components"]]
    if cmd == "orbit-image":
        keys = sorted((k for k in r if k.startswith("x") and k[1:].isdigit()), key=lambda k: int(k[1:]))
        rows = [[k, *r[k], *r["open"].get(k, [False, False])] for k in keys]
        return ["slot", "lo", "hi", "lo_open", "hi_open"], rows
    if cmd == "duflo-verify":
        in_b = {tuple(t) for t in r["branch_set"]}
        in_i = {tuple(t) for t in r["orbit_set"]}
        allt = sorted(in_b | in_i)
        width = max((len(t) for t in allt), default=0)
        return [f"tau{i + 1}" for i in range(width)] + ["in_branch", "in_image"], \
            [[*t, t in in_b, t in in_i] for t in allt]
    return ["name", "pass", "residual"], [[c.name, c.passed, c.residual] for c in report.checks]


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    head, rows = _rows(report)
    w.writerow(head)
    w.writerows(rows)
    return buf.getvalue()


def render_text(report: Report) -> str:
    lines = [f"{report.command}: {'ok' if report.ok else 'MISMATCH'}"]
    for k, v in report.result.items():
        lines.append(f"  {k}: {v}")
    for c in report.checks:
        res = "" if c.residual is None else f" (residual {c.residual:.3g})"
        lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}{res}")
    return "\n".join(lines) + "\n"


RENDER = {"json": render_json, "csv": render_csv, "text": render_text}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    payload = request_payload(args)
    try:
        REQUESTS[args.command].model_validate(payload)
        if args.url:
            report = _remote(args.url, args.command, payload)
        else:
            from .service import dispatch

            report = dispatch(args.command, payload)
    except (ValueError, TypeError, ValidationError) as exc:
        stderr.write(json.dumps({"error": str(exc)}) + "\n")
        return EXIT_USAGE
    out = RENDER[args.output](report)
    stdout.write(out if out.endswith("\n") else out + "\n")
    return EXIT_OK if report.ok else EXIT_MISMATCH


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
