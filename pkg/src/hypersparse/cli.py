"""Command-line front end: ``hypersparse {gen,run,verify,bench}``.

Exit codes: 0 ok, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Optional, Sequence

import numpy as np

from .decremental import UnknownEdgeError
from .dynamic import CapacityError, DynamicSparsifier
from .formats import AddOp, BatchOp, DelOp, FormatError, dumps_dhg, read_dhg, read_dhu, write_dhg
from .generate import WEIGHT_KINDS, random_edge_specs
from .hypergraph import Hypergraph, new_hypergraph
from .sampling import derive_key
from .static import SparsifyConfig, spectral_sparsify
from .verify import MAX_CUT_VERTICES, check_all_cuts, check_random_vectors

SEED_HELP = (
    "All randomness flows from --seed. Sub-seeds are 64-bit blake2b digests of "
    "'<seed>/<label>/...': 'gen' for generated edges, 'sample/<level>' for the "
    "coins of a static build, 'rebuild/<t>' for the engine rebuilt at insertion "
    "counter t, 'probe' for random verification vectors, 'bench/<cell>/<run>' "
    "for benchmark workloads."
)


class UsageError(Exception):
    pass


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", type=float, default=0.5, help="approximation parameter in (0,1)")
    p.add_argument("--seed", type=int, default=0, help="root seed")
    p.add_argument("--c-lambda", type=float, default=1.0, help="coreset constant")
    p.add_argument("--c", type=float, default=3.0, help="recursion-guard constant (>= 3)")
    p.add_argument("--lambda-override", type=int, default=None, help="fixed per-pair coreset size")
    p.add_argument("--mstar-override", type=int, default=None, help="fixed recursion threshold (0 forces recursion)")


def _config(args) -> SparsifyConfig:
    try:
        return SparsifyConfig(
            eps=args.eps,
            c_lambda=args.c_lambda,
            c=args.c,
            lambda_override=args.lambda_override,
            mstar_override=args.mstar_override,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _config_echo(cfg: SparsifyConfig, **extra) -> dict:
    out = {
        "eps": cfg.eps,
        "seed": cfg.seed,
        "c_lambda": cfg.c_lambda,
        "c": cfg.c,
        "lambda_override": cfg.lambda_override,
        "mstar_override": cfg.mstar_override,
    }
    out.update(extra)
    return out


def _emit_json(obj: dict, path: Optional[str]) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# --- gen -------------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.r < 1 or args.r > args.n:
        raise UsageError(f"need 1 <= r <= n, got r={args.r}, n={args.n}")
    if args.r == 1 and not args.allow_self:
        raise UsageError("r=1 forces tail = head = {v}; pass --allow-self to permit it")
    rng = np.random.default_rng(derive_key(args.seed, "gen"))
    specs = random_edge_specs(
        args.n, args.m, args.r, rng, weights=args.weights, alpha=args.alpha, allow_self=args.allow_self
    )
    H = new_hypergraph(args.n, specs)
    if args.out:
        write_dhg(H, args.out)
    else:
        sys.stdout.write(dumps_dhg(H))
    return 0


# --- run -------------------------------------------------------------------


def _group(ops, batch_size: int):
    """Pack consecutive plain ops into batches of ``batch_size`` (explicit batches pass through)."""
    if batch_size <= 1:
        yield from ops
        return
    pending = []
    for op in ops:
        if isinstance(op, BatchOp):
            if pending:
                yield BatchOp(tuple(pending))
                pending = []
            yield op
        else:
            pending.append(op)
            if len(pending) == batch_size:
                yield BatchOp(tuple(pending))
                pending = []
    if pending:
        yield BatchOp(tuple(pending))


def _count_adds(ops) -> int:
    total = 0
    for op in ops:
        if isinstance(op, BatchOp):
            total += len(op.adds)
        elif isinstance(op, AddOp):
            total += 1
    return total


def replay(ds: DynamicSparsifier, ops, batch_size: int = 1, per_update: Optional[list] = None) -> int:
    """Feed a parsed stream into ``ds``; returns the number of edge updates applied."""
    count = 0
    for op in _group(ops, batch_size):
        if isinstance(op, AddOp):
            ds.add(op.tail, op.head, op.weight)
            count += 1
        elif isinstance(op, DelOp):
            ds.delete(op.edge_id)
            count += 1
        else:
            ds.apply_batch([(a.tail, a.head, a.weight) for a in op.adds], op.deletes)
            count += len(op.ops)
        if per_update is not None:
            m = ds.last_metrics
            per_update.append(
                {
                    "kind": "batch" if isinstance(op, BatchOp) else m.kind,
                    "level_rebuilt": m.level_rebuilt,
                    "edges_moved": m.edges_moved,
                    "recourse": m.recourse.recourse if m.recourse else 0,
                    "live_m": ds.live_count,
                    "sparsifier_size": ds.sparsifier_size(),
                }
            )
    return count


def cmd_run(args) -> int:
    cfg = _config(args)
    if args.graph:
        H = read_dhg(args.graph)
        n = H.n
    else:
        if args.n is None:
            raise UsageError("--empty requires --n")
        H = Hypergraph(args.n)
        n = args.n
    ops = read_dhu(args.stream) if args.stream else []
    max_m = args.max_m or max(1, H.m + _count_adds(ops))
    ds = DynamicSparsifier(n, max_m, cfg, scheduler=args.scheduler)
    if H.m:
        ds.add_batch([(e.tail, e.head, e.weight) for e in H])
    before = ds.stats()
    per_update = [] if args.per_update else None
    start = time.perf_counter()
    updates = replay(ds, ops, args.batch_size, per_update)
    wall = time.perf_counter() - start
    after = ds.stats()
    metrics = {
        "config": _config_echo(
            cfg, n=n, max_m=max_m, scheduler=ds.scheduler.name, batch_size=args.batch_size
        ),
        "updates": updates,
        "initial_m": H.m,
        "live_m": after.live_m,
        "rebuilds": after.rebuilds,
        "edges_moved": after.edges_moved,
        "recourse_total": after.recourse_total - before.recourse_total,
        "sparsifier_size": after.sparsifier_size,
        "wall_time_s": wall,
        "amortized_us": 1e6 * wall / updates if updates else 0.0,
    }
    if per_update is not None:
        metrics["per_update"] = per_update
    exit_code = 0
    if args.verify:
        live, sparse = ds.live_edges(), ds.output_sparsifier()
        summary = _verify(live, sparse, args.eps, args.verify, args.trials, args.seed)
        metrics["verification"] = summary
        exit_code = 0 if summary["violations"] == 0 else 1
    if args.dump_sparsifier:
        write_dhg(ds.output_sparsifier(), args.dump_sparsifier)
    _emit_json(metrics, args.out_json)
    return exit_code


# --- verify ----------------------------------------------------------------


def _verify(H: Hypergraph, sparse: Hypergraph, eps: float, mode: str, trials: int, seed: int) -> dict:
    if mode in ("cuts", "both") and H.n > MAX_CUT_VERTICES:
        raise UsageError(f"cut enumeration needs n <= {MAX_CUT_VERTICES}, got n={H.n}")
    out = {"mode": mode, "violations": 0}
    if mode in ("cuts", "both"):
        rep = check_all_cuts(H, sparse, eps)
        out["cuts"] = rep.as_dict()
        out["violations"] += rep.violations
    if mode in ("random", "both"):
        rep = check_random_vectors(H, sparse, eps, trials, seed)
        out["random"] = rep.as_dict()
        out["violations"] += rep.violations
    return out


def cmd_verify(args) -> int:
    cfg = _config(args)
    H = read_dhg(args.graph)
    bundle = spectral_sparsify(H, cfg)
    sparse = bundle.sparsifier
    if args.test_corrupt:
        # halving every weight breaks the bound on any vector with positive energy
        sparse = Hypergraph(sparse.n, (e.scaled(0.5) for e in sparse))
    summary = _verify(H, sparse, args.eps, args.mode, args.trials, args.seed)
    summary.update(
        config=_config_echo(cfg),
        m=H.m,
        sparsifier_size=sparse.m,
        i_last=bundle.i_last,
    )
    _emit_json(summary, args.out_json)
    return 0 if summary["violations"] == 0 else 1


# --- bench -----------------------------------------------------------------


def _parse_grid(text: str) -> list[tuple[int, int, int]]:
    cells = []
    for item in text.split(","):
        try:
            n, m, r = (int(v) for v in item.split(":"))
        except ValueError:
            raise UsageError(f"bad grid cell {item!r}; expected n:m:r") from None
        cells.append((n, m, r))
    return cells


BENCH_COLUMNS = [
    "n", "m", "r", "run", "updates", "live_m", "sparsifier_size",
    "rebuilds_total", "edges_moved", "recourse_total", "wall_time_s", "amortized_us",
]
TIMING_COLUMNS = {"wall_time_s", "amortized_us"}


def bench_cell(n: int, m: int, r: int, cfg: SparsifyConfig, run: int, scheduler: str = "seq",
               batch_size: int = 1, mixed_ops: Optional[int] = None) -> dict:
    """Insert ``m`` random edges, then apply ``mixed_ops`` delete/insert pairs (default ``m // 4``)."""
    rng = np.random.default_rng(derive_key(cfg.seed, "bench", f"{n}:{m}:{r}", run))
    ds = DynamicSparsifier(n, m, cfg, scheduler=scheduler)
    specs = random_edge_specs(n, m, r, rng)
    for i in range(0, m, batch_size):
        ds.add_batch(specs[i : i + batch_size])
    mixed_ops = m // 4 if mixed_ops is None else mixed_ops
    live = list(range(m))
    fresh = random_edge_specs(n, mixed_ops, r, rng)
    for k in range(0, mixed_ops, batch_size):
        chunk = fresh[k : k + batch_size]
        victims = [live.pop(int(rng.integers(len(live)))) for _ in chunk]
        ds.delete_batch(victims) if batch_size > 1 else ds.delete(victims[0])
        live.extend(ds.add_batch(chunk))
    st = ds.stats()
    return {
        "n": n, "m": m, "r": r, "run": run,
        "updates": st.updates,
        "live_m": st.live_m,
        "sparsifier_size": st.sparsifier_size,
        "rebuilds_total": sum(st.rebuilds),
        "edges_moved": st.edges_moved,
        "recourse_total": st.recourse_total,
        "wall_time_s": st.wall_time,
        "amortized_us": st.amortized_us,
    }


def cmd_bench(args) -> int:
    cfg = _config(args)
    rows = [
        bench_cell(n, m, r, cfg, run, args.scheduler, args.batch_size)
        for n, m, r in _parse_grid(args.grid)
        for run in range(args.runs)
    ]
    if args.format == "json":
        text = json.dumps({"config": _config_echo(cfg, scheduler=args.scheduler), "rows": rows}, indent=2)
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue().rstrip("\n")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


# --- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypersparse",
        description="Dynamic spectral sparsification of directed hypergraphs.",
        epilog=SEED_HELP,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random .dhg hypergraph", epilog=SEED_HELP)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True, help="rank bound, |T ∪ H| <= r")
    p.add_argument("--weights", choices=WEIGHT_KINDS, default="uniform")
    p.add_argument("--alpha", type=float, default=2.0, help="pareto shape")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-self", action="store_true", help="permit r=1 self-loop edges")
    p.add_argument("-o", "--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="replay an update stream and emit JSON metrics", epilog=SEED_HELP)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="initial .dhg hypergraph")
    src.add_argument("--empty", action="store_true", help="start from an empty hypergraph")
    p.add_argument("--n", type=int, help="vertex count (with --empty)")
    p.add_argument("--stream", help=".dhu update stream")
    _add_config_flags(p)
    p.add_argument("--max-m", type=int, default=None, help="capacity (default: initial m + stream adds)")
    p.add_argument("--scheduler", choices=("seq", "par"), default="seq")
    p.add_argument("--batch-size", type=int, default=1, help="group plain stream lines into batches")
    p.add_argument("--per-update", action="store_true", help="include per-update metrics")
    p.add_argument("--verify", choices=("cuts", "random", "both"), help="check the final sparsifier")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--out-json", help="write metrics here instead of stdout")
    p.add_argument("--dump-sparsifier", help="write the final sparsifier as .dhg")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="sparsify a .dhg and check the energy bound", epilog=SEED_HELP)
    p.add_argument("graph")
    _add_config_flags(p)
    p.add_argument("--mode", choices=("cuts", "random", "both"), default="both")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--test-corrupt", action="store_true", help="halve sparsifier weights (fault injection)")
    p.add_argument("--out-json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="amortized update time over a size grid", epilog=SEED_HELP)
    p.add_argument("--grid", default="32:8192:4", help="comma-separated n:m:r cells")
    _add_config_flags(p)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--scheduler", choices=("seq", "par"), default="seq")
    p.add_argument("--batch-size", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FormatError, CapacityError, UnknownEdgeError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"hypersparse {args.command}: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
