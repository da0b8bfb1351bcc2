"""Command-line front end: offline database build, online verification,
and figure-data reporting.

Exit codes: 0 success, 2 usage, 3 data error, 4 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import bmc, clusterer, embed, gain, online, store
from .netlist import INDUCTIVE, INIT, AigerError, parse_aiger

log = logging.getLogger("clusterbmc")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_INTERNAL = 4

MODES = {"init": INIT, "inductive": INDUCTIVE}


class DataError(Exception):
    pass


def _bmc_config(args, mode=None) -> bmc.BmcConfig:
    return bmc.BmcConfig(
        time_budget=args.time_budget,
        conflict_budget=args.budget_conflicts,
        max_frames=args.max_frames,
        mode=mode or MODES[args.mode],
        seed=args.seed,
    )


def _design_name(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def cmd_offline(args) -> int:
    cfg = _bmc_config(args)
    os.makedirs(args.out_dir, exist_ok=True)
    paths = store.db_paths(args.out_dir)

    designs = []
    for path in args.designs:
        name = _design_name(path)
        try:
            with open(path) as fh:
                designs.append((name, parse_aiger(fh.read(), name=name)))
        except (OSError, AigerError) as e:
            log.error("skipping %s: %s", path, e)
    if not designs:
        raise DataError("no parseable designs")

    db1, tensors, standalone = [], [], {}
    for name, n in designs:
        props = []
        verdicts = {}
        for p in range(n.num_properties):
            c = online.extract_coi(n, p)
            v = bmc.check_single(n, p, cfg)
            verdicts[p] = v
            props.append(
                store.PropertyEntry(c.coi_inputs, c.coi_latches, c.coi_ands,
                                    v.status, v.depth, v.elapsed)
            )
            if args.embed == "sim":
                tensors.append(
                    embed.coi_signature(n, p, patterns=args.patterns,
                                        seed=args.seed, design=name)
                )
        standalone[name] = verdicts
        db1.append(store.DesignRecord(name, n.num_inputs, n.num_latches,
                                      n.num_ands, tuple(props)))
    if args.embed == "import":
        for path in args.tensors or []:
            tensors.append(embed.import_tensor(path))

    if len(tensors) >= 2:
        pca = embed.fit_pca(tensors, args.pca_threshold)
    else:
        raise DataError("need at least 2 property embeddings to fit PCA")
    db2 = [
        store.EmbeddingRecord(t.design, t.property, embed.project(pca, t))
        for t in tensors
    ]

    db3 = []
    reduced = {}
    for rec in db2:
        reduced.setdefault(rec.design, {})[rec.property] = rec.vector
    for name, n in designs:
        if len(reduced.get(name, {})) < 2:
            continue
        family = clusterer.build_family(name, reduced[name], seed=args.seed,
                                        max_clusters=args.max_clusters)
        runs = []
        for c in family.clusters:
            cv = bmc.check_cluster(n, sorted(c.members), cfg)
            runs.append((c.members, cv.per_property))
        imap = gain.build_influencing_map(name, standalone[name], runs)
        for p in sorted(imap.influencing):
            if imap.influencing[p] is None:
                continue
            db3.append(
                store.InfluenceRecord(name, p, imap.influencing[p],
                                      tuple(imap.records[p]))
            )

    store.write_db(store.DB1, db1, paths[store.DB1])
    store.write_db(store.DB2, db2, paths[store.DB2])
    store.write_db(store.DB3, db3, paths[store.DB3])
    store.write_pca(pca, paths["pca"])
    log.info("wrote %d designs, %d embeddings, %d influence rows",
             len(db1), len(db2), len(db3))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _bmc_config(args)
    paths = store.db_paths(args.db_dir)
    for key in (store.DB1, store.DB3):
        if not os.path.exists(paths[key]):
            raise DataError(f"missing database file {paths[key]}")
    db1 = store.read_db(store.DB1, paths[store.DB1])
    db3 = store.read_db(store.DB3, paths[store.DB3])
    try:
        with open(args.unknown) as fh:
            n = parse_aiger(fh.read(), name=_design_name(args.unknown))
    except (OSError, AigerError) as e:
        raise DataError(f"cannot load {args.unknown}: {e}") from None

    report = online.verify_unknown(
        n, db1, db3, cfg,
        delta=args.delta, assoc=args.assoc, baseline=args.baseline,
        design=_design_name(args.unknown),
    )
    os.makedirs(args.out_dir, exist_ok=True)
    report_path = os.path.join(args.out_dir, "report.txt")
    with open(report_path, "w") as fh:
        fh.write(report.render())
    for members, per_frame in report.cluster_runs:
        run_id = "cluster_" + "_".join(map(str, members))
        bmc.write_frame_csvs(per_frame, args.out_dir, run_id)
    print(report_path)
    return EXIT_OK


def _read_report(path: str):
    with open(path) as fh:
        lines = fh.read().splitlines()
    rows = []
    for line in lines[2:]:
        if not line:
            continue
        f = line.split("|")
        rows.append(f)
    return rows


def cmd_report(args) -> int:
    report_path = os.path.join(args.campaign_dir, "report.txt")
    if not os.path.exists(report_path):
        raise DataError(f"missing campaign report {report_path}")
    rows = _read_report(report_path)

    # aggregate per-frame metrics over all cluster runs of the campaign
    import csv
    import glob

    def aggregate(metric):
        totals: dict = {}
        for path in sorted(glob.glob(
                os.path.join(args.campaign_dir, f"cluster_*_{metric}.csv"))):
            with open(path) as fh:
                for rec in list(csv.DictReader(fh)):
                    x = int(rec["x"])
                    totals[x] = totals.get(x, 0.0) + float(rec["y"])
        return totals

    wrote = []
    for metric, out_name in (("conflicts", "conflicts.csv"),
                             ("cumulative_time", "verification_time.csv")):
        totals = aggregate(metric)
        out = os.path.join(args.campaign_dir, out_name)
        with open(out, "w") as fh:
            fh.write("x,y\n")
            for x in sorted(totals):
                fh.write(f"{x},{totals[x]!r}\n")
        wrote.append(out)

    scatter = os.path.join(args.campaign_dir, "depth_scatter.csv")
    with open(scatter, "w") as fh:
        fh.write("x,y\n")
        for f in rows:
            if f[6] != "-":  # baseline depth present
                fh.write(f"{f[6]},{f[3]}\n")
    wrote.append(scatter)
    for w in wrote:
        print(w)
    return EXIT_OK


def _add_common(p):
    p.add_argument("--time-budget", type=float, default=None,
                   help="per-property wall-clock budget in seconds")
    p.add_argument("--budget-conflicts", type=int, default=None,
                   help="per-property budget in solver cost units (deterministic)")
    p.add_argument("--max-frames", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=sorted(MODES), default="inductive")
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="clusterbmc",
        description="multi-property BMC with reusable cluster knowledge",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("offline", help="build the three databases")
    p.add_argument("designs", nargs="+", help="AIGER (aag) design files")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--pca-threshold", type=float, default=0.95)
    p.add_argument("--embed", choices=["sim", "import"], default="sim")
    p.add_argument("--patterns", type=int, default=4096)
    p.add_argument("--tensors", nargs="*", default=None,
                   help="tensor files for --embed import")
    p.add_argument("--max-clusters", type=int,
                   default=clusterer.DEFAULT_MAX_CLUSTERS)
    _add_common(p)
    p.set_defaults(func=cmd_offline)

    p = sub.add_parser("verify", help="verify an unknown design against a db")
    p.add_argument("unknown", help="AIGER (aag) file")
    p.add_argument("--db-dir", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--delta", type=int, default=None)
    p.add_argument("--assoc", choices=[online.ASSOC_OPTIMAL, online.ASSOC_GREEDY],
                   default=online.ASSOC_OPTIMAL)
    p.add_argument("--baseline", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="emit figure-data CSVs for a campaign")
    p.add_argument("campaign_dir")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command in ("offline", "verify") and (
        args.time_budget is None and args.budget_conflicts is None
        and args.max_frames is None
    ):
        ap.error("need --time-budget, --budget-conflicts, or --max-frames")
    try:
        return args.func(args)
    except (DataError, store.CorruptRow, store.SchemaVersionMismatch,
            online.EmptyDatabase, online.EmptyAfterPruning,
            embed.MalformedTensorFile, embed.WidthMismatch) as e:
        log.error("%s", e)
        return EXIT_DATA
    except AssertionError as e:
        log.error("internal invariant violation: %s", e)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
