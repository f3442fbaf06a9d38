"""Command-line interface: sampling, solving, counting oracles, moment
profiles, variance bounds, and experiment batches."""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .counting import count_forests, count_overlap_pairs, validate_overlap_bounds
from .experiments import (
    ConfigError,
    ExperimentConfig,
    export_csv,
    export_json,
    run_experiment,
)
from .graphs import read_graph, sample_gnp, write_graph
from .moments import compute_profile, variance_ratio_bound
from .rng import Seed
from .solver import greedy_tree_lower_bound, max_induced_tree
from .solver import DEFAULT_BUDGET


def _cmd_sample(args) -> int:
    g = sample_gnp(args.n, args.p, Seed(args.seed, 0))
    if args.out:
        write_graph(g, args.out)
    else:
        edges = list(g.edges())
        sys.stdout.write(f"{g.n} {len(edges)}\n")
        for (u, v) in edges:
            sys.stdout.write(f"{u} {v}\n")
    return 0


def _cmd_solve(args) -> int:
    g = read_graph(args.infile)
    if args.greedy:
        res = greedy_tree_lower_bound(g, args.restarts, Seed(args.seed, 0))
    else:
        res = max_induced_tree(g, args.budget)
    print(
        json.dumps(
            {
                "size": res.size,
                "witness": res.witness.vertices(),
                "optimal": res.optimal,
                "nodes": res.nodes_explored,
            }
        )
    )
    return 0


def _bound_rows_json(report) -> list[dict]:
    rows = []
    for row in report.rows:
        rows.append(
            {
                "r": row.r,
                "N": row.n_total,
                "N_matching": row.n_matching,
                "bound1": row.bound_square,
                "bound2": row.bound_product,
                "bound3": row.bound_forest,
                "ok": row.ok
                and all(ok for (_, app, ok) in row.product_bound_checks if app),
            }
        )
    return rows


def _cmd_oracle_overlap(args) -> int:
    table = count_overlap_pairs(args.k, args.l)
    report = validate_overlap_bounds(args.k, args.l)
    print(f"pairs of trees on two {args.k}-sets sharing {args.l} vertices")
    print(f"{'r':>3} {'N(k,l,r)':>14} {'matching':>14}")
    for r in range(args.l):
        print(f"{r:>3} {table.pairs_total[r]:>14} {table.pairs_matching[r]:>14}")
    print(f"sum {table.total():>14}  (= (k^(k-2))^2 = {table.total()})")
    print(
        json.dumps(
            {"k": args.k, "l": args.l, "rows": _bound_rows_json(report)}
        )
    )
    return 0


def _cmd_oracle_forests(args) -> int:
    print(f"labeled forests on {args.l} vertices by edge count")
    rows = []
    for r in range(args.l):
        v = count_forests(args.l, r).value
        rows.append({"l": args.l, "r": r, "phi": v})
        print(f"{r:>3} {v:>14}")
    print(json.dumps({"l": args.l, "rows": rows}))
    return 0


def _cmd_oracle_validate(args) -> int:
    all_ok = True
    payload = []
    for k in range(2, args.kmax + 1):
        for l in range(2, k + 1):
            report = validate_overlap_bounds(k, l)
            rows = _bound_rows_json(report)
            ok = all(row["ok"] for row in rows)
            all_ok = all_ok and ok
            payload.append({"k": k, "l": l, "rows": rows})
            print(f"k={k} l={l}: {'ok' if ok else 'VIOLATION'}")
    print(json.dumps(payload))
    return 0 if all_ok else 1


def _cmd_moments_profile(args) -> int:
    prof = compute_profile(args.n, args.p, args.delta)
    print(json.dumps(prof.to_dict(), indent=2))
    return 0


def _cmd_moments_varbound(args) -> int:
    k = args.k
    if k is None:
        from .moments import solve_k_hat

        k = math.floor(solve_k_hat(args.n, args.p).root - 0.5)
    vb = variance_ratio_bound(args.n, args.p, k, args.w_exponent)
    print("part,ell,log_summand")
    for (part, ell, v) in vb.entries:
        print(f"{part},{ell},{v!r}")
    print(
        json.dumps(
            {
                "part_sums": {k: v for k, v in vb.part_log_sums.items()},
                "total": vb.log_total,
            }
        )
    )
    return 0


def _cmd_experiment_run(args) -> int:
    try:
        config = ExperimentConfig.from_json(args.config)
        config.validate()
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 3
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    result = run_experiment(config, workers=args.workers)
    try:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        export_csv(result.records, out / "records.csv")
        export_json(result, out / "result.json")
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return 3
    for s in result.summaries:
        win = f"[{s.window[0]}, {s.window[1]}]" if s.window else "n/a"
        print(
            f"n={s.n} p={s.p:.6g}: window {win} mass {s.window_mass:.4f}"
            f"{' (near tie)' if s.near_tie else ''}"
        )
    print(f"wrote {out / 'records.csv'} and {out / 'result.json'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="indtrees",
        description="Maximum induced trees in G(n,p): solvers, oracles, moments.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="sample a G(n,p) graph")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_sample)

    sp = sub.add_parser("solve", help="maximum induced tree of a graph file")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--greedy", action="store_true")
    sp.add_argument("--restarts", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=_cmd_solve)

    op = sub.add_parser("oracle", help="exact counting oracles")
    osub = op.add_subparsers(dest="oracle_command", required=True)
    sp = osub.add_parser("overlap", help="tree-pair overlap counts N(k,l,r)")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.set_defaults(func=_cmd_oracle_overlap)
    sp = osub.add_parser("forests", help="forest counts phi(l,r)")
    sp.add_argument("--l", type=int, required=True)
    sp.set_defaults(func=_cmd_oracle_forests)
    sp = osub.add_parser("validate", help="check all counting bounds on a grid")
    sp.add_argument("--kmax", type=int, default=6)
    sp.set_defaults(func=_cmd_oracle_validate)

    mp = sub.add_parser("moments", help="log-domain moment formulas")
    msub = mp.add_subparsers(dest="moments_command", required=True)
    sp = msub.add_parser("profile", help="k*, k_hat, threshold, partition points")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--delta", type=float, default=0.5)
    sp.set_defaults(func=_cmd_moments_profile)
    sp = msub.add_parser("varbound", help="variance-ratio partition bounds")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--w-exponent", type=float, default=0.25)
    sp.add_argument(
        "--k", type=int, default=None, help="tree size; default floor(k_hat - 0.5)"
    )
    sp.set_defaults(func=_cmd_moments_varbound)

    ep = sub.add_parser("experiment", help="Monte Carlo concentration batches")
    esub = ep.add_subparsers(dest="experiment_command", required=True)
    sp = esub.add_parser("run", help="run a batch from a JSON config")
    sp.add_argument("--config", required=True)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_experiment_run)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # downstream consumer (e.g. head) closed the pipe; not an error
        try:
            sys.stdout.close()
        except OSError:
            pass
        return 0


if __name__ == "__main__":
    sys.exit(main())
