"""Online phase: verify an unknown design by borrowing cluster knowledge.

Pipeline: prune DB1 candidates to designs with a similar property count,
pick the structurally closest design B, associate B's properties with the
unknown's through a minimum-cost assignment over COI-size differences,
rewrite B's influencing clusters through that association, then spend the
budget on the converted clusters (leftover properties run standalone).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import bmc
from .gain import classify, compute_gain
from .netlist import Netlist, extract_coi
from .store import DesignRecord, PropertyEntry, query_db1_by_property_count

log = logging.getLogger(__name__)

ASSOC_OPTIMAL = "optimal"
ASSOC_GREEDY = "greedy"

# rectangular assignment pads with this sentinel; anything matched to a pad
# stays unmapped
_SENTINEL = 10 ** 9


class EmptyDatabase(ValueError):
    pass


class EmptyAfterPruning(ValueError):
    pass


def default_delta(property_count: int) -> int:
    return max(5, math.ceil(0.2 * property_count))


@dataclass(frozen=True)
class DiffMatrix:
    rows: tuple      # properties of the known design B
    cols: tuple      # properties of the unknown design
    entries: tuple   # entries[i][j], non-negative


@dataclass(frozen=True)
class PropertyMap:
    mapping: dict    # B property -> unknown property (injective)
    unmapped: tuple  # B properties without a partner


def unknown_record(n: Netlist, design: str = "") -> DesignRecord:
    """DB1-shaped summary of a netlist with live COI extraction."""
    props = []
    for p in range(n.num_properties):
        c = extract_coi(n, p)
        props.append(
            PropertyEntry(c.coi_inputs, c.coi_latches, c.coi_ands,
                          bmc.UNDET, -1, 0.0)
        )
    return DesignRecord(design or n.name or "unknown", n.num_inputs,
                        n.num_latches, n.num_ands, tuple(props))


def select_similar_design(db1_records, unknown: DesignRecord,
                          delta: int | None = None) -> str:
    """Closest design by L1 structural distance within the pruned set.

    Pruning keeps designs whose property count lies strictly within
    (P_U - delta, P_U + delta); an empty result doubles delta and retries
    instead of failing.
    """
    if not db1_records:
        raise EmptyDatabase("DB1 has no designs")
    p_u = unknown.property_count
    if delta is None:
        delta = default_delta(p_u)
    delta = max(1, delta)
    candidates = []
    while not candidates:
        ids = set(query_db1_by_property_count(db1_records, p_u - delta, p_u + delta))
        candidates = [r for r in db1_records if r.design in ids]
        if not candidates:
            if delta > 2 * max(p_u, max(r.property_count for r in db1_records)):
                raise EmptyAfterPruning(f"no candidates even at delta={delta}")
            log.warning("pruning empty at delta=%d; widening to %d", delta, 2 * delta)
            delta *= 2
    fu = unknown.feature_vector()

    def distance(r):
        return sum(abs(a - b) for a, b in zip(r.feature_vector(), fu))

    return min(candidates, key=lambda r: (distance(r), r.design)).design


def build_diff_matrix(b: DesignRecord, unknown: Netlist) -> DiffMatrix:
    """Pairwise L1 distance over per-property COI sizes."""
    u_props = []
    for p in range(unknown.num_properties):
        c = extract_coi(unknown, p)
        u_props.append((c.coi_inputs, c.coi_latches, c.coi_ands))
    entries = tuple(
        tuple(
            abs(bp.coi_inputs - ui) + abs(bp.coi_latches - ul) + abs(bp.coi_ands - ua)
            for ui, ul, ua in u_props
        )
        for bp in b.props
    )
    return DiffMatrix(
        rows=tuple(range(len(b.props))),
        cols=tuple(range(len(u_props))),
        entries=entries,
    )


def associate_properties(m: DiffMatrix, method: str = ASSOC_OPTIMAL) -> PropertyMap:
    """Injective B-property -> unknown-property map of minimal total cost."""
    nr, nc = len(m.rows), len(m.cols)
    if nr == 0 or nc == 0:
        return PropertyMap({}, tuple(m.rows))
    if method == ASSOC_GREEDY:
        # repeatedly take the smallest remaining entry, row-then-column ties
        mapping = {}
        used_cols = set()
        remaining = set(range(nr))
        while remaining and len(used_cols) < nc:
            best = None
            for i in sorted(remaining):
                for j in range(nc):
                    if j in used_cols:
                        continue
                    key = (m.entries[i][j], i, j)
                    if best is None or key < best:
                        best = key
            _, i, j = best
            mapping[m.rows[i]] = m.cols[j]
            used_cols.add(j)
            remaining.discard(i)
        unmapped = tuple(m.rows[i] for i in sorted(remaining))
        return PropertyMap(mapping, unmapped)

    size = max(nr, nc)
    cost = np.full((size, size), _SENTINEL, dtype=float)
    for i in range(nr):
        for j in range(nc):
            cost[i, j] = m.entries[i][j]
    rows, cols = linear_sum_assignment(cost)
    mapping = {}
    for i, j in zip(rows, cols):
        if i < nr and j < nc:
            mapping[m.rows[i]] = m.cols[j]
    unmapped = tuple(r for k, r in enumerate(m.rows) if m.rows[k] not in mapping)
    return PropertyMap(mapping, unmapped)


def convert_clusters(influencing_clusters, prop_map: PropertyMap):
    """Rewrite cluster member sets through the association.

    Unmapped members are dropped individually; clusters falling below two
    members are discarded; the result is deduplicated, deterministically
    ordered by (size, members).
    """
    converted = []
    seen = set()
    for members in influencing_clusters:
        mapped = frozenset(
            prop_map.mapping[p] for p in members if p in prop_map.mapping
        )
        if len(mapped) < len(members):
            log.warning(
                "cluster %s: dropped %d unmapped member(s)",
                sorted(members), len(members) - len(mapped),
            )
        if len(mapped) < 2 or mapped in seen:
            continue
        seen.add(mapped)
        converted.append(mapped)
    return sorted(converted, key=lambda c: (len(c), tuple(sorted(c))))


@dataclass
class PropertyRow:
    property: int
    cluster: tuple | None   # sorted members, None for standalone
    status: str
    depth: int
    elapsed: float
    baseline_status: str | None = None
    baseline_depth: int | None = None
    baseline_elapsed: float | None = None
    transition: str | None = None
    gain: float | None = None


@dataclass
class CampaignReport:
    unknown: str
    matched: str
    assoc: str
    rows: list = field(default_factory=list)
    cluster_runs: list = field(default_factory=list)  # (members, per_frame)

    def render(self) -> str:
        out = [f"campaign {self.unknown} matched={self.matched} assoc={self.assoc}"]
        out.append(
            "property|cluster|status|depth|elapsed"
            "|baseline_status|baseline_depth|baseline_elapsed|transition|gain"
        )
        for r in sorted(self.rows, key=lambda r: r.property):
            cluster = " ".join(map(str, r.cluster)) if r.cluster else "-"
            base = [
                r.baseline_status if r.baseline_status is not None else "-",
                "-" if r.baseline_depth is None else str(r.baseline_depth),
                "-" if r.baseline_elapsed is None else repr(r.baseline_elapsed),
                r.transition if r.transition is not None else "-",
                "-" if r.gain is None else repr(r.gain),
            ]
            out.append(
                f"{r.property}|{cluster}|{r.status}|{r.depth}|{r.elapsed!r}|"
                + "|".join(base)
            )
        return "\n".join(out) + "\n"


def verify_unknown(
    unknown: Netlist,
    db1_records,
    db3_records,
    cfg: bmc.BmcConfig,
    delta: int | None = None,
    assoc: str = ASSOC_OPTIMAL,
    baseline: bool = False,
    design: str = "",
) -> CampaignReport:
    """Algorithm for the full online phase; every property gets one verdict.

    Each converted cluster is charged the per-property budget times the
    number of still-unverified properties it claims, so the campaign total
    stays within budget x property count.
    """
    if not db1_records:
        raise EmptyDatabase("DB1 has no designs")
    u_rec = unknown_record(unknown, design)
    matched = select_similar_design(db1_records, u_rec, delta)
    b_rec = next(r for r in db1_records if r.design == matched)
    diff = build_diff_matrix(b_rec, unknown)
    prop_map = associate_properties(diff, assoc)

    influencing = []
    seen = set()
    for r in db3_records:
        if r.design == matched and r.influencing not in seen:
            seen.add(r.influencing)
            influencing.append(r.influencing)
    clusters = convert_clusters(influencing, prop_map)

    report = CampaignReport(unknown=u_rec.design, matched=matched, assoc=assoc)
    claimed: set = set()
    per_prop_budget = cfg.conflict_budget if cfg.deterministic else cfg.time_budget
    for members in clusters:
        new = sorted(set(members) - claimed)
        if not new:
            continue
        run = bmc.run_with_budget(
            unknown, sorted(members), cfg, per_prop_budget * len(new)
        )
        report.cluster_runs.append((tuple(sorted(members)), run.per_frame))
        for p in new:
            v = run.per_property[p]
            report.rows.append(
                PropertyRow(p, tuple(sorted(members)), v.status, v.depth, v.elapsed)
            )
        claimed.update(new)

    for p in range(unknown.num_properties):
        if p in claimed:
            continue
        v = bmc.check_single(unknown, p, cfg)
        report.rows.append(PropertyRow(p, None, v.status, v.depth, v.elapsed))

    if baseline:
        by_prop = {r.property: r for r in report.rows}
        for p in range(unknown.num_properties):
            v = bmc.check_single(unknown, p, cfg)
            row = by_prop[p]
            row.baseline_status = v.status
            row.baseline_depth = v.depth
            row.baseline_elapsed = v.elapsed
            clustered = bmc.Verdict(row.status, row.depth, row.elapsed)
            tr = classify(v, clustered)
            row.transition = tr
            size = len(row.cluster) if row.cluster else 2
            row.gain = compute_gain(
                tr, v, clustered, max(size, 2), property_index=p,
                cluster=frozenset(row.cluster or ()),
            ).value
    return report
