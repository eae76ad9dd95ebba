"""Command-line interface: a thin client over the duality service.

By default the commands talk to the FastAPI app in-process; ``--url``
points them at a running server instead (see ``duality serve``).  Output is
JSON for single results and CSV for sweeps, numbers rounded to 12
significant digits; identical flags and seeds produce identical bytes.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import json
import sys
from typing import Optional

import click

SEED_ENV = "DUALITY_SEED"


def _round_floats(obj):
    if isinstance(obj, float):
        return float(format(obj, ".12g"))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round_floats(v) for v in obj]
    return obj


def _dump_json(payload: dict) -> str:
    return json.dumps(_round_floats(payload), indent=2) + "\n"


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".12g")


class ServiceClient:
    """POSTs to a remote server when a URL is given, otherwise to the
    in-process ASGI app."""

    def __init__(self, url: Optional[str] = None):
        if url:
            import httpx

            self._client = httpx.Client(base_url=url, timeout=None)
        else:
            from fastapi.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app())

    def post(self, path: str, payload: dict) -> dict:
        try:
            resp = self._client.post(path, json=payload)
        except Exception as exc:  # connection trouble is a usage error
            _fail(f"service unreachable: {exc}")
        try:
            body = resp.json()
        except ValueError:
            _fail(f"service returned status {resp.status_code} with a non-JSON body")
        if resp.status_code != 200:
            if isinstance(body, dict) and "message" in body:
                _fail(f"{body.get('error', 'error')}: {body['message']}")
            _fail(f"service returned status {resp.status_code}: {body}")
        return body


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _load_state(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
        payload = json.loads(text)
    except OSError as exc:
        _fail(f"cannot read state file {path!r}: {exc}")
    except json.JSONDecodeError as exc:
        _fail(f"state file {path!r} is not valid JSON: {exc}")
    if not isinstance(payload, dict):
        _fail(f"state file {path!r} must hold a JSON object")
    return payload


def _write_out(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _search_payload(starts, grid, tol, max_iter, seed) -> dict:
    return {"starts": starts, "grid": grid, "tol": tol, "max_iter": max_iter, "seed": seed}


def _curves_csv(curves: list[dict]) -> str:
    lines = ["measure,n,kind,p,v,param"]
    for curve in curves:
        for pt in curve["points"]:
            lines.append(
                f"{curve['measure']},{curve['n']},{curve['kind']},"
                f"{_fmt(pt['p'])},{_fmt(pt['v'])},{_fmt(pt.get('param'))}"
            )
    return "\n".join(lines) + "\n"


def _records_csv(records: list[dict]) -> str:
    if not records:
        return ""
    n = len(records[0]["counts"])
    header = "mode,shots," + ",".join(f"count_{i + 1}" for i in range(n)) + ",fourier_json"
    lines = [header]
    for rec in records:
        fourier = rec.get("fourier")
        fourier_json = "" if fourier is None else json.dumps(
            {k: v for k, v in fourier.items() if v not in (None, [])}, sort_keys=True
        ).replace('"', '""')
        counts = ",".join(str(c) for c in rec["counts"])
        lines.append(f'{rec["mode"]},{rec["shots"]},{counts},"{fourier_json}"')
    return "\n".join(lines) + "\n"


@click.group()
@click.option("--url", default=None, envvar="DUALITY_URL", help="Remote service URL; defaults to in-process execution.")
@click.pass_context
def main(ctx, url):
    """Path knowledge P and interference strength V for n-path interferometers."""
    ctx.obj = {"url": url}


def _client(ctx) -> ServiceClient:
    return ServiceClient(ctx.obj.get("url"))


search_options = [
    click.option("--starts", type=int, default=None, help="Multi-start count (default depends on n)."),
    click.option("--grid", type=int, default=24, show_default=True, help="Coarse grid resolution per phase."),
    click.option("--tol", type=float, default=1e-10, show_default=True, help="Convergence tolerance."),
    click.option("--max-iter", type=int, default=60, show_default=True, help="Maximum ascent cycles."),
    click.option("--seed", type=int, default=0, envvar=SEED_ENV, show_default=True, help="Search seed."),
]


def _with_search_options(fn):
    for opt in reversed(search_options):
        fn = opt(fn)
    return fn


@main.command()
@click.option("--state", "state_path", required=True, help="State JSON file ('-' for stdin).")
@click.option("--measure", "measure_text", required=True, help="Measure, e.g. one-guess, purity, bet:1,0,-1, renyi:2.5.")
@_with_search_options
@click.pass_context
def measure(ctx, state_path, measure_text, starts, grid, tol, max_iter, seed):
    """Compute P and V of a state; prints JSON with the optimizing Fourier
    descriptor."""
    payload = {
        "state": _load_state(state_path),
        "measure": measure_text,
        "search": _search_payload(starts, grid, tol, max_iter, seed),
    }
    body = _client(ctx).post("/measure", payload)
    click.echo(_dump_json(body), nl=False)


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--measure", "measure_text", required=True)
@click.option("--samples", type=int, default=101, show_default=True)
@click.option("--curve", type=click.Choice(["auto", "outer", "inner", "both", "conjectured"]), default="auto", show_default=True)
@click.option("--out", default=None, help="Write CSV here instead of stdout.")
@click.pass_context
def border(ctx, n, measure_text, samples, curve, out):
    """Emit an analytic or conjectured border curve as CSV."""
    body = _client(ctx).post(
        "/border", {"n": n, "measure": measure_text, "samples": samples, "curve": curve}
    )
    _write_out(_curves_csv(body["curves"]), out)


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--measure", "measure_text", required=True)
@click.option("--count", type=int, required=True)
@click.option("--pure", is_flag=True, help="Scan pure states only (the default).")
@click.option("--mix", type=float, default=0.0, show_default=True, help="Blend cap toward the maximally mixed state.")
@_with_search_options
@click.option("--out", default=None)
@click.pass_context
def scan(ctx, n, measure_text, count, pure, mix, starts, grid, tol, max_iter, seed, out):
    """Sample random states and emit their (P, V) cloud as CSV."""
    if pure and mix > 0:
        _fail("--pure and --mix are mutually exclusive")
    mix = 0.0 if pure else mix
    payload = {
        "n": n,
        "measure": measure_text,
        "count": count,
        "purity_mix": mix,
        "seed": seed,
        "search": _search_payload(starts, grid, tol, max_iter, seed),
    }
    body = _client(ctx).post("/scan", payload)
    curve = {
        "measure": body["measure"],
        "n": body["n"],
        "kind": "numeric-scan",
        "points": body["points"],
    }
    _write_out(_curves_csv([curve]), out)


@main.command()
@click.option("--state", "state_path", required=True, help="State JSON file ('-' for stdin).")
@click.option("--shots", type=int, required=True)
@click.option("--seed", type=int, default=0, envvar=SEED_ENV, show_default=True)
@click.option("--fourier", "fourier_specs", multiple=True, help="Wave-mode Fourier descriptor: inline JSON or @file; repeatable.")
@click.option("--estimate", "estimate_measure", default=None, help="Also estimate (P, V) for this measure; switches output to JSON.")
@click.option("--optimize", is_flag=True, help="Add the optimizer's argmax Fourier setting as a wave run (needs --estimate).")
@click.option("--resamples", type=int, default=200, show_default=True, help="Bootstrap resamples for standard errors.")
@click.option("--out", default=None)
@click.pass_context
def simulate(ctx, state_path, shots, seed, fourier_specs, estimate_measure, optimize, resamples, out):
    """Simulate particle- and wave-mode click records (CSV; JSON with
    --estimate)."""
    fams = []
    for spec in fourier_specs:
        text = spec
        if spec.startswith("@"):
            try:
                text = open(spec[1:]).read()
            except OSError as exc:
                _fail(f"cannot read Fourier file {spec[1:]!r}: {exc}")
        try:
            fams.append(json.loads(text))
        except json.JSONDecodeError as exc:
            _fail(f"--fourier value is not valid JSON: {exc}")
    payload = {
        "state": _load_state(state_path),
        "shots": shots,
        "seed": seed,
        "fourier": fams,
        "measure": estimate_measure,
        "optimize": optimize,
        "resamples": resamples,
    }
    body = _client(ctx).post("/simulate", payload)
    if estimate_measure:
        _write_out(_dump_json(body), out)
    else:
        _write_out(_records_csv(body["records"]), out)


@main.command()
@click.argument("suite", type=click.Choice(["qubit", "qutrit", "ququart", "qunit", "axioms"]))
@click.option("--seed", type=int, default=0, envvar=SEED_ENV, show_default=True)
@click.pass_context
def verify(ctx, suite, seed):
    """Run a named verification suite; exit 0 only if every check passes."""
    body = _client(ctx).post("/verify", {"suite": suite, "seed": seed})
    click.echo(_dump_json(body), nl=False)
    sys.exit(0 if body["passed"] else 1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("duality.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
