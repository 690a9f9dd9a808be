"""Command-line client for the xxchain service.

The CLI is a thin layer: it builds a request, posts it to the HTTP API
(an in-process instance by default, or a running server via --url) and
renders the JSON response as JSON or CSV.

Exit codes: 0 success, 1 verification failure, 2 validation error,
3 unreliable numerics (suppressed by --allow-unreliable).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_VALIDATION = 2
EXIT_UNRELIABLE = 3


def _apply_thread_override():
    """Optional XXCHAIN_THREADS env var caps the BLAS thread pools; must run
    before numpy is imported."""
    threads = os.environ.get("XXCHAIN_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)


def _make_client(url: str | None):
    if url:
        import httpx

        return httpx.Client(base_url=url)
    from fastapi.testclient import TestClient

    from .service import create_app

    return TestClient(create_app())


def _post(args, path: str, payload: dict) -> dict:
    with _make_client(args.url) as client:
        response = client.post(path, json=payload)
    if response.status_code != 200:
        try:
            detail = response.json().get("detail")
        except ValueError:
            detail = response.text
        print(f"error: {detail}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)
    return response.json()


def _meta_line(payload: dict) -> str:
    parts = [f"schemaVersion={payload.get('schemaVersion', 1)}"]
    for key in ("tolerance", "precision"):
        if key in payload:
            parts.append(f"{key}={payload[key]}")
    return "# " + " ".join(parts)


def _to_csv(command: str, payload: dict) -> str:
    lines = [_meta_line(payload)]
    if command == "energy":
        lines.append("r,B,energy")
        for row in payload["rows"]:
            lines.append(f"{row['r']},{row['B']!r},{row['energy']!r}")
    elif command == "phase-diagram":
        lines.append("B,E_min,dEdB,r")
        for row in payload["plot"]:
            lines.append(f"{row['B']!r},{row['eMin']!r},{row['dEdB']!r},{row['r']}")
    elif command == "schmidt":
        lines.append(
            "N,M,r,l,rank,rows,cols,smallestRetained,largestDiscarded,gap,"
            "reliable,precision"
        )
        for rep in payload["reports"]:
            for blk in rep["blocks"]:
                lines.append(
                    f"{rep['N']},{rep['M']},{rep['r']},{blk['l']},{blk['rank']},"
                    f"{blk['rows']},{blk['cols']},{blk['smallestRetained']!r},"
                    f"{blk['largestDiscarded']!r},{blk['gap']!r},"
                    f"{blk['reliable']},{blk['precision']}"
                )
    elif command == "classify":
        lines.append("r,criticalField,rankAbove,rankBelow,verdict,reliable")
        for t in payload["transitions"]:
            lines.append(
                f"{t['r']},{t['criticalField']!r},{t['rankAbove']},"
                f"{t['rankBelow']},{t['verdict']},{t['reliable']}"
            )
    elif command == "verify":
        lines.append("check,passed,cases,detail")
        for c in payload["checks"]:
            lines.append(f"{c['name']},{c['passed']},{c['cases']},{c['detail']}")
    elif command == "state":
        lines.append("sites,amplitude")
        for entry in payload["entries"]:
            sites = " ".join(str(int(s)) for s in entry[:-1])
            lines.append(f"{sites},{entry[-1]!r}")
    else:
        raise ValueError(f"no CSV layout for {command}")
    return "\n".join(lines) + "\n"


def _emit(args, command: str, payload: dict):
    if args.format == "csv":
        text = _to_csv(command, payload)
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _reliability_exit(args, payload: dict) -> int:
    if not payload.get("reliable", True) and not args.allow_unreliable:
        print(
            "error: rank decision flagged unreliable "
            "(rerun with --allow-unreliable to accept)",
            file=sys.stderr,
        )
        return EXIT_UNRELIABLE
    return EXIT_OK


def cmd_energy(args) -> int:
    payload = {
        "N": args.n,
        "J": args.j,
        "B": args.b,
        "auto_grid": args.auto_grid,
        "r": args.r,
    }
    if args.b_start is not None:
        payload["b_range"] = {
            "start": args.b_start,
            "stop": args.b_stop,
            "steps": args.b_steps,
        }
    if args.r_min is not None:
        payload["r_range"] = {"start": args.r_min, "stop": args.r_max}
    result = _post(args, "/energy", payload)
    _emit(args, "energy", result)
    return EXIT_OK


def cmd_phase_diagram(args) -> int:
    result = _post(
        args,
        "/phase-diagram",
        {"N": args.n, "J": args.j, "samples_per_interval": args.samples},
    )
    _emit(args, "phase-diagram", result)
    return EXIT_OK


def cmd_schmidt(args) -> int:
    payload = {
        "N": args.n,
        "M": args.m,
        "r": args.r,
        "tolerance": args.tolerance,
        "precision": args.precision,
    }
    if args.r_min is not None:
        payload["r_range"] = {"start": args.r_min, "stop": args.r_max}
    result = _post(args, "/schmidt", payload)
    _emit(args, "schmidt", result)
    return _reliability_exit(args, result)


def cmd_classify(args) -> int:
    result = _post(
        args,
        "/classify",
        {
            "N": args.n,
            "J": args.j,
            "M": args.m,
            "tolerance": args.tolerance,
            "precision": args.precision,
        },
    )
    _emit(args, "classify", result)
    return _reliability_exit(args, result)


def cmd_verify(args) -> int:
    result = _post(
        args, "/verify", {"N": args.n, "J": args.j, "tolerance": args.tolerance}
    )
    _emit(args, "verify", result)
    for check in result["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"{status}  {check['name']} ({check['cases']} cases)", file=sys.stderr)
        for failure in check["failures"]:
            print(f"      {failure}", file=sys.stderr)
    return EXIT_OK if result["allPassed"] else EXIT_VERIFY_FAILED


def cmd_state(args) -> int:
    result = _post(args, "/state", {"N": args.n, "r": args.r})
    _emit(args, "state", result)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("xxchain.service:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xxchain",
        description="XX chain ground states, phase diagram and Schmidt-rank "
        "entanglement classification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, rank_opts=False):
        p.add_argument("--n", type=int, required=True, help="site count N")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", help="write the report to this path")
        p.add_argument("--url", help="base URL of a running server (default: in-process)")
        if rank_opts:
            p.add_argument("--tolerance", type=float, default=1e-10)
            p.add_argument(
                "--precision", choices=("standard", "extended"), default="standard"
            )
            p.add_argument("--allow-unreliable", action="store_true")

    p = sub.add_parser("energy", help="sector energies over an (r, B) grid")
    common(p)
    p.add_argument("--j", type=float, default=1.0)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--b-start", type=float, default=None)
    p.add_argument("--b-stop", type=float, default=None)
    p.add_argument("--b-steps", type=int, default=11)
    p.add_argument("--auto-grid", action="store_true",
                   help="sample the midpoint of every phase interval")
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--r-min", type=int, default=None)
    p.add_argument("--r-max", type=int, default=None)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("phase-diagram", help="critical fields and plot data")
    common(p)
    p.add_argument("--j", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=3,
                   help="plot samples per phase interval")
    p.set_defaults(func=cmd_phase_diagram)

    p = sub.add_parser("schmidt", help="block Schmidt ranks across a cut")
    common(p, rank_opts=True)
    p.add_argument("--m", type=int, default=None, help="left block size (default N//2)")
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--r-min", type=int, default=None)
    p.add_argument("--r-max", type=int, default=None)
    p.set_defaults(func=cmd_schmidt)

    p = sub.add_parser("classify", help="SLOCC verdicts at every transition")
    common(p, rank_opts=True)
    p.add_argument("--j", type=float, default=1.0)
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run the oracle cross-check suite")
    common(p)
    p.add_argument("--j", type=float, default=1.0)
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("state", help="serialize a sector ground state")
    common(p)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    _apply_thread_override()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
