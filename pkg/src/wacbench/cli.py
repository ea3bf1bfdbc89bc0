"""Command-line entry points: batch solves and the HTTP service.

Exit codes: 0 success, 1 algorithmic failure, 2 input error.  Faults are
reported as one machine-readable JSON object on stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import lp_model, session_engine
from .cutting_plane import RunConfig
from .errors import WacbenchError
from .prob_bounds import UncertaintySpec
from .utility_oracles import (
    LogWeighted,
    MarginFn,
    PiecewiseProb,
    QuadraticPair,
    robust_barrier_utility,
    utility_spec_from_json,
)

ENV_LISTEN = "WACBENCH_LISTEN"
ENV_DATA_DIR = "WACBENCH_DATA_DIR"
ENV_LOG_LEVEL = "WACBENCH_LOG_LEVEL"


class CliError(Exception):
    def __init__(self, kind: str, detail: str):
        self.kind = kind
        self.detail = detail
        super().__init__(detail)


def _fail(kind: str, detail: str, code: int = 2):
    print(json.dumps({"kind": kind, "detail": detail}))
    return code


def _row_token(tok: str, m: int) -> int:
    """1-based row index; 'obj' or 'm' names the embedded objective row."""
    tok = tok.strip().lower()
    if tok in ("obj", "m"):
        return m
    idx = int(tok)
    if not (1 <= idx <= m):
        raise CliError("input", f"row index {idx} out of range 1..{m}")
    return idx


def parse_utility(text: str, ineq: lp_model.LpInstance, unc: UncertaintySpec, m_aug: int):
    """Mini-language: log:..., quadratic_pair:i,j, piecewise:file.json,
    robust_barrier:mu=..., or file.json with a serialized spec."""
    if ":" not in text:
        raise CliError("input", f"malformed utility spec {text!r}")
    family, _, args = text.partition(":")
    family = family.strip().lower()

    if family == "log":
        t = np.zeros(m_aug)
        if args.startswith("t="):
            vals = [float(v) for v in args[2:].split(",")]
            if len(vals) != m_aug:
                raise CliError("input", f"log:t= needs {m_aug} entries, got {len(vals)}")
            t = np.array(vals)
        else:
            for part in args.split(","):
                key, _, val = part.partition("=")
                if not val:
                    raise CliError("input", f"malformed log term {part!r}")
                t[_row_token(key, m_aug) - 1] = float(val)
        return LogWeighted(t)

    if family == "quadratic_pair":
        try:
            i_s, j_s = args.split(",")
        except ValueError as exc:
            raise CliError("input", f"quadratic_pair needs two indices, got {args!r}") from exc
        return QuadraticPair(_row_token(i_s, m_aug), _row_token(j_s, m_aug))

    if family == "piecewise":
        if args.endswith(".json"):
            with open(args) as fh:
                return utility_spec_from_json(json.load(fh))
        # derive thresholds from the uncertainty file: eps1 = |db_i|_1, eps2 = inf-like
        rows = {}
        for idx, ru in unc.rows.items():
            rows[idx] = (ru.norm1, 1e30)
        if not rows:
            raise CliError("input", "piecewise utility needs --uncertainty or a JSON file")
        return PiecewiseProb(rows)

    if family == "robust_barrier":
        kv = dict(part.partition("=")[::2] for part in args.split(",") if part)
        try:
            mu = float(kv["mu"])
        except (KeyError, ValueError) as exc:
            raise CliError("input", "robust_barrier needs mu=<positive float>") from exc
        margins = []
        for i in range(ineq.num_rows):
            ru = unc.rows.get(i + 1)
            margins.append(MarginFn("const", value=ru.norm1) if ru else MarginFn("zero"))
        return robust_barrier_utility(ineq, margins, mu)

    if family == "file":
        with open(args) as fh:
            return utility_spec_from_json(json.load(fh))

    raise CliError("input", f"unknown utility family {family!r}")


def _parse_robust_box(text: str) -> tuple[list[int], float]:
    rows: list[int] = []
    frac = None
    for part in text.replace(";", ",").split(","):
        key, _, val = part.partition("=")
        key = key.strip().lower()
        if key == "rows":
            rows = [int(v) for v in val.split("+") if v]
        elif key == "frac":
            frac = float(val)
        elif key:
            rows.extend(int(v) for v in [key] if key.isdigit())
    if frac is None or not rows:
        raise CliError("input", "--robust-box needs rows=i+j+... and frac=<float>")
    return rows, frac


def robust_box_baseline(ineq: lp_model.LpInstance, rows: list[int], frac: float) -> float:
    """Classical robust baseline: shift b on the given rows and re-solve."""
    shifted = ineq.b.copy()
    for idx in rows:
        if not (1 <= idx <= ineq.num_rows):
            raise CliError("input", f"robust-box row {idx} out of range")
        shifted[idx - 1] -= frac * abs(shifted[idx - 1])
    boxed = lp_model.LpInstance(
        name=ineq.name + "-robustbox",
        objective_sense=ineq.objective_sense,
        c=ineq.c,
        A=ineq.A,
        row_kinds=list(ineq.row_kinds),
        b=shifted,
        lower=ineq.lower,
        upper=ineq.upper,
        row_names=list(ineq.row_names),
        col_names=list(ineq.col_names),
    )
    return lp_model.nominal_optimum(boxed)


def load_problem(args) -> tuple[lp_model.LpInstance, lp_model.AugmentedLp]:
    try:
        with open(args.mps) as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError("io", f"cannot read {args.mps}: {exc}") from exc
    inst = lp_model.parse_mps(text)
    ineq = inst if args.already_inequality else lp_model.to_inequality_form(inst)
    aug = lp_model.embed_objective(ineq, v=args.v)
    return ineq, aug


def cmd_solve(args) -> int:
    ineq, aug = load_problem(args)
    unc = UncertaintySpec(rows={})
    if args.uncertainty:
        try:
            with open(args.uncertainty) as fh:
                unc = UncertaintySpec.from_json(json.load(fh))
        except OSError as exc:
            raise CliError("io", f"cannot read {args.uncertainty}: {exc}") from exc

    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    summary: dict = {
        "problem": ineq.name,
        "rows": aug.num_rows,
        "cols": aug.num_cols,
        "objective_floor": aug.v,
    }

    if args.robust_box:
        rows, frac = _parse_robust_box(",".join(args.robust_box))
        summary["robust_box_objective"] = robust_box_baseline(ineq, rows, frac)

    if args.utility:
        spec = parse_utility(args.utility, ineq, unc, aug.num_rows)
        config = RunConfig(
            strategy=args.strategy,
            variant=args.variant,
            cut_kind=args.cut_kind,
            max_iter=args.max_iter,
            grad_tol=args.grad_tol,
            seed=args.seed,
        )
        state = session_engine.create_session(
            aug, uncertainty=unc, config=config, mode="simulated", utility=spec
        )
        state = session_engine.step(state)
        final = state.trace.final
        summary.update(
            {
                "objective": aug.objective(final.x),
                "iterations": len(state.trace.iterates),
                "stop_reason": state.stop_reason,
                "final_utility": final.value,
                "final_gradient_norm": float(np.linalg.norm(final.g)) if final.g is not None else None,
            }
        )
        with open(os.path.join(out_dir, "trace.jsonl"), "w") as fh:
            fh.write(state.trace.to_jsonl())
        with open(os.path.join(out_dir, "report.json"), "w") as fh:
            json.dump(state.report.to_json(), fh, indent=2)
        with open(os.path.join(out_dir, "report.txt"), "w") as fh:
            fh.write(state.report.to_text_table())

    with open(os.path.join(out_dir, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2)
    print(json.dumps(summary))
    return 0


def cmd_convert(args) -> int:
    """Parse + convert only; prints dimensions (used for corpus checks)."""
    ineq, aug = load_problem(args)
    info = {
        "name": ineq.name,
        "rows": ineq.num_rows,
        "cols": ineq.num_cols,
        "augmented_rows": aug.num_rows,
        "objective_floor": aug.v,
        "nominal_optimum": lp_model.original_objective_value(
            ineq, lp_model.nominal_optimum(ineq)
        ),
    }
    print(json.dumps(info))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .http_api import create_app

    listen = args.listen or os.environ.get(ENV_LISTEN, "127.0.0.1:8000")
    host, _, port_s = listen.rpartition(":")
    data_dir = args.data_dir or os.environ.get(ENV_DATA_DIR, "./wacbench-sessions")
    log_level = os.environ.get(ENV_LOG_LEVEL, "info")
    app = create_app(data_dir=data_dir)
    try:
        uvicorn.run(app, host=host or "127.0.0.1", port=int(port_s), log_level=log_level)
    except SystemExit as exc:
        return int(exc.code or 1)
    except OSError as exc:  # port in use
        print(json.dumps({"kind": "io", "detail": str(exc)}))
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wacbench",
        description="Interactive robust-LP workbench on weighted analytic centers",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_problem_flags(p):
        p.add_argument("--mps", required=True, help="path to the MPS file")
        p.add_argument("--v", type=float, default=None, help="objective floor (default: near-optimal)")
        p.add_argument(
            "--already-inequality",
            action="store_true",
            help="treat the MPS as already in all-<= form (skip the dual conversion)",
        )

    ps = sub.add_parser("solve", help="run a simulated session end to end")
    add_problem_flags(ps)
    ps.add_argument("--utility", help="utility spec, e.g. log:68=1,obj=10 or quadratic_pair:2,3")
    ps.add_argument("--uncertainty", help="UncertaintySpec JSON file")
    ps.add_argument("--strategy", default="auto",
                    choices=["auto", "analytic_center", "toward_scaled_gradient",
                             "midpoint_bisection", "random_interior"])
    ps.add_argument("--variant", default="plain", choices=["plain", "modified1", "modified2"])
    ps.add_argument("--cut-kind", default="anchored", choices=["anchored", "naive"])
    ps.add_argument("--max-iter", type=int, default=200)
    ps.add_argument("--grad-tol", type=float, default=1e-6)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--robust-box", nargs="+",
                    help="classical baseline, e.g. rows=68,71,74 frac=0.2")
    ps.add_argument("--out", help="artifact directory (trace.jsonl, report.*, summary.json)")
    ps.set_defaults(fn=cmd_solve)

    pc = sub.add_parser("convert", help="parse and convert an MPS file, print dimensions")
    add_problem_flags(pc)
    pc.set_defaults(fn=cmd_convert)

    pv = sub.add_parser("serve", help="serve the session HTTP API")
    pv.add_argument("--listen", help="host:port (default env WACBENCH_LISTEN or 127.0.0.1:8000)")
    pv.add_argument("--data-dir", help="session persistence directory")
    pv.set_defaults(fn=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        return _fail(exc.kind, exc.detail, 2)
    except OSError as exc:
        return _fail("io", str(exc), 2)
    except (ValueError, KeyError) as exc:
        return _fail("input", str(exc), 2)
    except WacbenchError as exc:
        return _fail(type(exc).__name__, str(exc), 1)


if __name__ == "__main__":
    sys.exit(main())
