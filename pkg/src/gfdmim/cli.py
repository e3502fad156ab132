"""Command line: run sweeps locally, serve the HTTP API, or submit to a server."""
import argparse
import json
import sys
import time
from dataclasses import fields

from .simulate import SCHEMES, SimConfig, emit_csv, run_sweep


def _snr_grid(text: str) -> tuple:
    """Comma- or space-separated dB values; quoting keeps negatives intact."""
    parts = text.replace(",", " ").split()
    if not parts:
        raise argparse.ArgumentTypeError("empty SNR grid")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad SNR grid {text!r}") from None


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE",
                        help="JSON file of config fields; flags override it")
    parser.add_argument("--scheme", choices=SCHEMES)
    parser.add_argument("--users", type=int, dest="n_users", metavar="U")
    parser.add_argument("--tx", type=int, dest="n_tx", metavar="NT",
                        help="transmit antennas per user")
    parser.add_argument("--rx", type=int, dest="n_rx", metavar="NR",
                        help="receive antennas at the base station")
    parser.add_argument("--subsymbols", type=int, dest="n_subsymbols", metavar="L")
    parser.add_argument("--subcarriers", type=int, dest="n_subcarriers", metavar="NTOT")
    parser.add_argument("--group-size", type=int, dest="group_size", metavar="N")
    parser.add_argument("--active", type=int, dest="n_active", metavar="K",
                        help="active subcarriers per group")
    parser.add_argument("--mod-order", type=int, dest="mod_order", metavar="M")
    parser.add_argument("--alpha", type=float, help="prototype filter roll-off")
    parser.add_argument("--taps", type=int, dest="n_taps", metavar="V",
                        help="channel impulse response length")
    parser.add_argument("--snr", type=_snr_grid, dest="snr_db", metavar="GRID",
                        help='SNR grid in dB, e.g. --snr "0 5 10" or --snr="-5,0,5"')
    parser.add_argument("--min-errors", type=int, dest="min_errors")
    parser.add_argument("--max-bits", type=int, dest="max_bits")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--workers", type=int)


def _build_config(args: argparse.Namespace) -> SimConfig:
    values = {}
    if args.config:
        with open(args.config) as fh:
            values.update(json.load(fh))
    for f in fields(SimConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = flag
    return SimConfig(**values)


def _cmd_run(args: argparse.Namespace) -> int:
    config = _build_config(args)
    records = run_sweep(config)
    emit_csv(records, config, args.out)
    for r in records:
        print(f"{config.scheme}  snr={r.snr_db:g} dB  ber={r.ber:.4e} "
              f"(+-{r.ci95:.1e})  errors={r.errors}  bits={r.bits}  trials={r.trials}")
    print(f"wrote {args.out}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn
    uvicorn.run("gfdmim.service.app:app", host=args.host, port=args.port)
    return 0


def _cmd_submit(args: argparse.Namespace) -> int:
    import httpx

    config = _build_config(args)
    body = {f.name: getattr(config, f.name) for f in fields(SimConfig)}
    body["snr_db"] = list(config.snr_db)
    with httpx.Client(base_url=args.server, timeout=30.0) as client:
        job = client.post("/jobs", json=body).raise_for_status().json()
        job_id = job["job_id"]
        print(f"submitted job {job_id}")
        while True:
            info = client.get(f"/jobs/{job_id}").raise_for_status().json()
            if info["status"] in ("done", "failed"):
                break
            time.sleep(args.poll)
        if info["status"] == "failed":
            print(f"job failed: {info.get('detail')}", file=sys.stderr)
            return 1
        text = client.get(f"/jobs/{job_id}/csv").raise_for_status().text
    with open(args.out, "w", newline="") as fh:
        fh.write(text)
    print(f"wrote {args.out}")
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gfdmim",
        description="BER sweeps for multi-user uplink GFDM with index modulation")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a sweep in-process and write a CSV")
    _add_config_flags(run)
    run.add_argument("--out", required=True, metavar="CSV", help="output CSV path")
    run.set_defaults(func=_cmd_run)

    serve = sub.add_parser("serve", help="start the HTTP sweep service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=_cmd_serve)

    submit = sub.add_parser("submit", help="submit a sweep to a running service")
    _add_config_flags(submit)
    submit.add_argument("--server", required=True, metavar="URL")
    submit.add_argument("--out", required=True, metavar="CSV")
    submit.add_argument("--poll", type=float, default=1.0, metavar="SECONDS")
    submit.set_defaults(func=_cmd_submit)
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, TypeError) as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
