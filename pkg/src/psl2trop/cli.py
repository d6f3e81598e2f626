"""Thin command-line client for the computation service.

Every subcommand posts a request to the HTTP API and renders the JSON
response to stdout or a file.  By default the service runs in-process (no
network); pass --server to talk to a remote instance instead.  Sampling
commands are deterministic for a fixed seed: the same invocation writes
byte-identical files.

Exit codes: 0 success, 1 parse error, 2 inconclusive truncation,
3 hypothesis violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional

import httpx

EXIT_CODES = {
    "parse_error": 1,
    "inconclusive_truncation": 2,
    "hypothesis_violation": 3,
    "invalid_input": 1,
}

CLOUD_CSV_HEADER = [
    "label",
    "kind",
    "alpha",
    "m00re",
    "m00im",
    "m01re",
    "m01im",
    "m10re",
    "m10im",
    "m11re",
    "m11im",
    "proj0",
    "proj1",
    "proj2",
    "meta",
]


def _make_client(server: Optional[str]) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # in-process transport: the CLI stays a pure client of the HTTP API
    # without needing a running server
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DeprecationWarning)
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _fail(detail) -> int:
    if isinstance(detail, dict) and "kind" in detail:
        print(f"error ({detail['kind']}): {detail.get('message', '')}", file=sys.stderr)
        return EXIT_CODES.get(detail["kind"], 1)
    print(f"error: {detail}", file=sys.stderr)
    return 1


def _post(client: httpx.Client, path: str, payload: dict):
    resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        return None, _fail(detail)
    return resp.json(), 0


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _csv_value(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _limit_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "h", "dist"])
    for row in rows:
        writer.writerow([_csv_value(row["t"]), _csv_value(row["h"]), _csv_value(row["dist"])])
    return buf.getvalue()


def _cloud_csv(payload) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CLOUD_CSV_HEADER)
    for pt in payload["points"]:
        flat = [x for entry in pt["matrix"] for x in entry]
        writer.writerow(
            [pt["label"], pt["kind"], _csv_value(pt["alpha"])]
            + [_csv_value(x) for x in flat]
            + [_csv_value(x) for x in pt["proj"]]
            + [json.dumps(pt["meta"], sort_keys=True)]
        )
    return buf.getvalue()


def _matrix_payload(args) -> dict:
    return {"a": args.a, "b": args.b, "c": args.c, "d": args.d}


def _grid_payload(text: str) -> dict:
    try:
        start, stop, count = text.split(":")
        return {"start": float(start), "stop": float(stop), "count": int(count)}
    except ValueError:
        raise SystemExit(f"bad grid spec {text!r}; expected start:stop:count")


def _schedule_bounds(text: str):
    try:
        k_min, k_max = text.split(":")
        return int(k_min), int(k_max)
    except ValueError:
        raise SystemExit(f"bad schedule {text!r}; expected k_min:k_max")


def cmd_val(args, client) -> int:
    payload = {"matrix": _matrix_payload(args), "depth": args.depth}
    data, code = _post(client, "/val", payload)
    if code:
        return code
    _emit(_json_text(data), args.out)
    return 0


def cmd_limit(args, client) -> int:
    k_min, k_max = _schedule_bounds(args.schedule)
    payload = {
        "matrix": _matrix_payload(args),
        "k_min": k_min,
        "k_max": k_max,
        "depth": args.depth,
    }
    if args.target:
        with open(args.target) as fh:
            target = json.load(fh)
        payload["target"] = target.get("cone_point", target)
    data, code = _post(client, "/limit", payload)
    if code:
        return code
    if args.format == "json":
        _emit(_json_text(data), args.out)
    else:
        _emit(_limit_csv(data["rows"]), args.out)
    return 0


def _emit_cloud(data, args) -> int:
    if args.format == "csv":
        _emit(_cloud_csv(data), args.out)
    else:
        _emit(_json_text(data), args.out)
    return 0


def cmd_example(args, client) -> int:
    payload = {
        "name": args.name,
        "seed": args.seed,
        "alpha": _grid_payload(args.alpha_grid),
        "theta_count": args.theta_grid,
    }
    data, code = _post(client, "/example", payload)
    if code:
        return code
    return _emit_cloud(data, args)


def cmd_family(args, client) -> int:
    payload = {
        "poly": args.poly,
        "floor_count": args.floor_count,
        "base_count": args.base_count,
        "alpha": _grid_payload(args.alpha_grid),
        "theta_count": args.theta_grid,
        "seed": args.seed,
    }
    data, code = _post(client, "/family", payload)
    if code:
        return code
    return _emit_cloud(data, args)


def cmd_fiber(args, client) -> int:
    payload = {"matrix": _matrix_payload(args), "theta": args.theta}
    data, code = _post(client, "/fiber", payload)
    if code:
        return code
    _emit(_json_text(data), args.out)
    return 0


def cmd_serve(args, _client) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _add_matrix_args(p):
    p.add_argument("a", help="series for the (0,0) entry, e.g. 't'")
    p.add_argument("b", help="series for the (0,1) entry, e.g. 't^2'")
    p.add_argument("c", help="series for the (1,0) entry, e.g. '0'")
    p.add_argument("d", help="series for the (1,1) entry, e.g. 't^-1'")


def _add_common(p, fmt_default="json"):
    p.add_argument("--server", help="base URL of a running service; default in-process")
    p.add_argument("--out", help="output path; default stdout")
    p.add_argument("--format", choices=["json", "csv"], default=fmt_default)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psl2trop",
        description="Matrix valuations over truncated Hahn series and phase "
        "tropicalization point clouds (thin client of the HTTP service).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("val", help="symbolic valuation of a series matrix")
    _add_matrix_args(p)
    p.add_argument("--depth", type=float, default=12.0)
    _add_common(p)
    p.set_defaults(fn=cmd_val)

    p = sub.add_parser("limit", help="numeric degeneration limit with convergence table")
    _add_matrix_args(p)
    p.add_argument("--schedule", default="2:40", help="k_min:k_max for log t = 2^k")
    p.add_argument("--target", help="JSON file with a cone point; default: symbolic valuation")
    p.add_argument("--depth", type=float, default=12.0)
    _add_common(p, fmt_default="csv")
    p.set_defaults(fn=cmd_limit)

    p = sub.add_parser("example", help="point cloud for a worked example")
    p.add_argument("name", choices=["line", "quadric"])
    p.add_argument("--alpha-grid", default="1.25:4:6", help="start:stop:count, heights above 1")
    p.add_argument("--theta-grid", type=int, default=8, help="phase samples per circle")
    _add_common(p)
    p.set_defaults(fn=cmd_example)

    p = sub.add_parser("family", help="three-component image of a constant family")
    p.add_argument("poly", help="homogeneous polynomial in x0..x3, e.g. 'x0 - x3'")
    p.add_argument("--floor-count", type=int, default=100)
    p.add_argument("--base-count", type=int, default=40)
    p.add_argument("--alpha-grid", default="0.5:3:6", help="start:stop:count cylinder heights")
    p.add_argument("--theta-grid", type=int, default=8)
    _add_common(p)
    p.set_defaults(fn=cmd_family)

    p = sub.add_parser("fiber", help="circle-bundle point over a quadric point")
    _add_matrix_args(p)
    p.add_argument("--theta", type=float, required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_fiber)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return cmd_serve(args, None)
    client = _make_client(args.server)
    try:
        return args.fn(args, client)
    finally:
        client.close()


if __name__ == "__main__":
    raise SystemExit(main())
