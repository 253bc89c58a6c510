"""Command-line front end: verify, simulate, suite, bench, corpus emit.

Exit codes for verify: 0 Verified, 1 Refuted, 2 Inconclusive, 3 input
error.  All randomness is seeded; benchmark timings exclude parsing and
the dense oracle.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import corpus as corp
from . import oracle as orc
from .errors import StabVerifyError
from .hoare import Triple, VerifyConfig, load_triple, oracle_check, verify_triple
from .lang import parse_program, program_stats
from .oracle import QState, SigmaState, basis_vector, branch_sum


@dataclass
class RunConfig(VerifyConfig):
    fmt: str = "text"
    out: str = ""


def _add_common_flags(p: argparse.ArgumentParser):
    p.add_argument("--oracle-cap", type=int, default=12)
    p.add_argument("--unroll", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-terms", type=int, default=4096)
    p.add_argument("--format", dest="fmt", choices=("json", "text"), default="text")
    p.add_argument("--out", default="")


def _config(args) -> RunConfig:
    return RunConfig(
        oracle_cap=args.oracle_cap,
        unroll_cap=args.unroll,
        tol=args.tol,
        samples=args.samples,
        seed=args.seed,
        max_terms=args.max_terms,
        fmt=args.fmt,
        out=args.out,
    )


def _write(cfg: RunConfig, text: str):
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    cfg = _config(args)
    try:
        triple = load_triple(args.triple)
    except (OSError, StabVerifyError, KeyError, ValueError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 3
    started = time.perf_counter()
    outcome = verify_triple(triple, cfg)
    elapsed = time.perf_counter() - started
    payload = {
        "name": triple.name,
        **outcome.to_dict(),
        "timings": {"verify_s": round(elapsed, 6)},
    }
    if cfg.fmt == "json":
        _write(cfg, json.dumps(payload, indent=2))
    else:
        _write(cfg, f"{triple.name}: {outcome.status}"
               + (f" ({outcome.reason})" if outcome.reason else ""))
    return {"Verified": 0, "Refuted": 1, "Inconclusive": 2}[outcome.status]


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def cmd_simulate(args) -> int:
    cfg = _config(args)
    try:
        program = parse_program(Path(args.program).read_text())
        init_bits = args.init or "0" * program.n_qubits
        state = QState(program.n_qubits, basis_vector(program.n_qubits, init_bits))
    except (OSError, StabVerifyError, ValueError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 3
    result = orc.run_program(
        program, (state, SigmaState()), unroll_cap=cfg.unroll_cap,
        cap=cfg.oracle_cap, want_trace=True,
    )
    lines = orc.trace_log_lines(result)
    terminals = []
    for st, sg in result.branches:
        terminals.append(
            {
                "mass": round(st.mass(), 12),
                "sigma": sg.pretty(),
                "rho_digest": st.digest(),
                "rho_diag": [round(float(x), 10) for x in np.real(np.diag(st.density()))],
            }
        )
    if cfg.fmt == "json":
        _write(cfg, json.dumps({"trace": [json.loads(l) for l in lines],
                                "terminals": terminals,
                                "residual_mass": sum(c.weight for c in result.residual)},
                               indent=2))
    else:
        out = [f"{program.name}: |{args.init or '0' * program.n_qubits}> input"]
        out += [f"  {l}" for l in lines]
        out.append(f"terminal branches: {len(terminals)}")
        for t in terminals:
            out.append(f"  mass={t['mass']} sigma={t['sigma']} digest={t['rho_digest']}")
        _write(cfg, "\n".join(out))
    return 0


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------


def run_suite(
    cfg: VerifyConfig,
    distances=(3, 5),
    name_filter: str = "",
    with_oracle: bool = True,
    oracle_qubit_cap: int = 10,
) -> dict:
    """Verify every golden triple; cross-check eligible ones on the oracle."""
    rows = []
    for case in corp.golden_suite(distances):
        if name_filter and name_filter not in case.name:
            continue
        for gt in case.goldens:
            t0 = time.perf_counter()
            outcome = verify_triple(gt.triple, cfg)
            verify_s = time.perf_counter() - t0
            row = {
                "case": case.name,
                "triple": gt.triple.name,
                "behavior": gt.behavior,
                "expect": gt.expect,
                "status": outcome.status,
                "ok": outcome.status == gt.expect,
                "verify_s": round(verify_s, 4),
                "oracle": None,
            }
            eligible = (
                with_oracle
                and case.oracle_eligible
                and gt.oracle
                and outcome.verified
                and gt.triple.program.n_qubits <= oracle_qubit_cap
            )
            if eligible:
                report = oracle_check(case.oracle_triple(gt), cfg)
                row["oracle"] = f"{report['passes']}/{report['samples']}"
                row["ok"] = row["ok"] and not report["failures"]
            rows.append(row)
    passed = sum(1 for r in rows if r["ok"])
    return {"rows": rows, "passed": passed, "total": len(rows)}


def cmd_suite(args) -> int:
    cfg = _config(args)
    distances = tuple(int(x) for x in args.distances.split(",")) if args.distances else (3, 5)
    summary = run_suite(
        cfg,
        distances=distances,
        name_filter=args.filter,
        with_oracle=not args.no_oracle,
    )
    if cfg.fmt == "json":
        _write(cfg, json.dumps(summary, indent=2))
    else:
        lines = []
        for r in summary["rows"]:
            mark = "pass" if r["ok"] else "FAIL"
            oracle = f" oracle={r['oracle']}" if r["oracle"] else ""
            lines.append(
                f"[{mark}] {r['triple']:34s} {r['status']:12s}"
                f" (expect {r['expect']}){oracle}"
            )
        lines.append(f"{summary['passed']}/{summary['total']} triples match expectation")
        _write(cfg, "\n".join(lines))
    return 0 if summary["passed"] == summary["total"] else 1


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def run_bench(cfg: VerifyConfig, dmax: int = 25, repeats: int = 3) -> dict:
    """Symbolic verification wall-times for repetition codes, with a
    fitted power-law exponent; decoder-free cases only."""
    rows = []
    for d in range(3, dmax + 1, 2):
        cases = corp.gen_repetition_suite(d, with_decoder=False)
        triples = [gt.triple for case in cases for gt in case.goldens]
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            for t in triples:
                outcome = verify_triple(t, cfg)
                assert outcome.verified, f"bench triple {t.name} not verified"
            best = min(best, time.perf_counter() - t0)
        stats = program_stats(cases[0].program)
        rows.append(
            {
                "d": d,
                "triples": len(triples),
                "statements_init": stats["statement_count"],
                "time_s": best,
            }
        )
    ds = np.array([r["d"] for r in rows], dtype=float)
    ts = np.array([max(r["time_s"], 1e-7) for r in rows], dtype=float)
    exponent = float(np.polyfit(np.log(ds), np.log(ts), 1)[0])
    return {"rows": rows, "exponent": round(exponent, 3)}


def cmd_bench(args) -> int:
    cfg = _config(args)
    if args.code != "rep":
        print("only --code rep is implemented", file=sys.stderr)
        return 3
    summary = run_bench(cfg, dmax=args.dmax)
    if cfg.fmt == "json":
        _write(cfg, json.dumps(summary, indent=2))
    else:
        lines = [f"{'d':>4} {'triples':>8} {'stmts(init)':>12} {'time_s':>10}"]
        for r in summary["rows"]:
            lines.append(
                f"{r['d']:>4} {r['triples']:>8} {r['statements_init']:>12}"
                f" {r['time_s']:>10.4f}"
            )
        lines.append(f"fitted power-law exponent: {summary['exponent']}")
        _write(cfg, "\n".join(lines))
    return 0


# ---------------------------------------------------------------------------
# corpus emit
# ---------------------------------------------------------------------------


def cmd_corpus(args) -> int:
    if args.action != "emit":
        print("usage: corpus emit DIR", file=sys.stderr)
        return 3
    distances = tuple(int(x) for x in args.distances.split(",")) if args.distances else (3, 5)
    manifest = corp.emit_corpus(args.dir, distances)
    print(f"wrote {len(manifest['case_studies'])} case studies to {args.dir}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stabverify",
        description="Verify stabilizer-code programs against Hoare-style "
        "contracts and a dense-matrix oracle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check one triple file")
    p.add_argument("triple")
    _add_common_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="run a program on the dense interpreter")
    p.add_argument("program")
    p.add_argument("--init", default="", help="basis state, written q_{n-1}..q_0")
    _add_common_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("suite", help="run the golden corpus")
    p.add_argument("--filter", default="")
    p.add_argument("--distances", default="")
    p.add_argument("--no-oracle", action="store_true")
    _add_common_flags(p)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("bench", help="symbolic scaling benchmark")
    p.add_argument("--code", default="rep")
    p.add_argument("--dmax", type=int, default=25)
    _add_common_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("corpus", help="corpus utilities")
    p.add_argument("action", choices=("emit",))
    p.add_argument("dir")
    p.add_argument("--distances", default="")
    p.set_defaults(func=cmd_corpus)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
