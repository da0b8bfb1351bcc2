"""Incremental bounded model checking over one shared solver session.

A run owns a single SolverSession.  Frames are Tseitin-encoded one at a
time; at every frame the bad literal of each still-unresolved property is
assumed and solved, in ascending property order.  Learned clauses persist
across properties and frames, which is what makes clustered runs cheaper
than the sum of standalone runs on similar properties.

Budgets come in two flavours: wall-clock seconds and conflict counts
(deterministic, used by all reproducibility tests).  In
conflict mode every time-like field is measured in *cost units*, where one
solver call costs 1 + its conflicts.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

from .netlist import (
    INDUCTIVE,
    Netlist,
    PropertyIndexOutOfRange,
    UnfoldBuilder,
)
from . import satcore

SAT = "SAT"
UNSAT = "UNSAT"
UNDET = "UNDET"


class EmptyCluster(ValueError):
    pass


class BmcConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BmcConfig:
    """Per-property verification budget and engine settings."""

    time_budget: float | None = None     # seconds per property
    conflict_budget: int | None = None   # cost units per property
    max_frames: int | None = None        # highest frame index checked
    mode: str = INDUCTIVE
    seed: int = 0
    proof_bound: int | None = None

    def __post_init__(self):
        if self.time_budget is None and self.conflict_budget is None and self.max_frames is None:
            raise BmcConfigError("need a time budget, conflict budget, or frame bound")
        if self.time_budget is not None and self.time_budget <= 0:
            raise BmcConfigError("time_budget must be positive")
        if self.conflict_budget is not None and self.conflict_budget <= 0:
            raise BmcConfigError("conflict_budget must be positive")
        if (
            self.proof_bound is not None
            and self.max_frames is not None
            and self.proof_bound > self.max_frames
        ):
            raise BmcConfigError("proof_bound must not exceed max_frames")

    @property
    def deterministic(self) -> bool:
        return self.time_budget is None


@dataclass
class Cex:
    """Counterexample trace: frame-0 latch values plus per-frame inputs."""

    latch_init: list
    inputs: list  # inputs[f][i] is input i at frame f


@dataclass
class FrameStat:
    frame: int
    conflicts: int
    solve_time: float
    cumulative_time: float


@dataclass
class Verdict:
    status: str
    depth: int        # CEX frame for SAT; proof bound for UNSAT; deepest
                      # refuted frame (-1 if none) for UNDET
    elapsed: float = 0.0
    cex: Cex | None = None
    per_frame: list = field(default_factory=list)


@dataclass
class ClusterVerdict:
    per_property: dict  # property index -> Verdict
    per_frame: list     # shared FrameStats of the whole session
    total_elapsed: float


class _CostMeter:
    """Budget accounting; wall seconds or deterministic cost units."""

    def __init__(self, cfg: BmcConfig, multiplier: int):
        self.deterministic = cfg.deterministic
        if self.deterministic:
            self.budget = (
                None if cfg.conflict_budget is None else cfg.conflict_budget * multiplier
            )
        else:
            self.budget = cfg.time_budget * multiplier
        self.spent = 0.0
        self._t0 = time.perf_counter()

    def remaining(self):
        if self.budget is None:
            return None
        return self.budget - self.spent

    def exhausted(self) -> bool:
        rem = self.remaining()
        return rem is not None and rem <= 0

    def charge_call(self, result: satcore.SolveResult, wall_seconds: float) -> float:
        cost = (1 + result.conflicts_this_call) if self.deterministic else wall_seconds
        self.spent += cost
        return cost


class _Encoder:
    """Tseitin-encodes unfolded frames into a solver session.

    Combinational variable k maps to solver variable k + 1; solver variable
    1 is pinned true so constants can appear in assumptions.
    """

    def __init__(self, n: Netlist, mode: str, solver: satcore.SolverSession):
        self.builder = UnfoldBuilder(n, mode)
        self.solver = solver
        solver.ensure_var(1)
        solver.add_clause([1])

    def slit(self, comb_lit: int) -> int:
        if comb_lit == 0:
            return -1
        if comb_lit == 1:
            return 1
        var = (comb_lit >> 1) + 1
        return -var if comb_lit & 1 else var

    def add_frame(self) -> list:
        triples = self.builder.add_frame()
        # inputs (and frame-0 latches) may feed nothing; the solver still
        # needs their variables so counterexamples cover them
        for lit in self.builder.frame_inputs[-1]:
            if lit > 1:
                self.solver.ensure_var((lit >> 1) + 1)
        for lit in self.builder.frame0_latches:
            if lit > 1:
                self.solver.ensure_var((lit >> 1) + 1)
        for out, a, b in triples:
            o, sa, sb = self.slit(out), self.slit(a), self.slit(b)
            self.solver.add_clause([-o, sa])
            self.solver.add_clause([-o, sb])
            self.solver.add_clause([o, -sa, -sb])
        return self.builder.frame_bads[-1]

    def extract_cex(self, model, frames: int) -> Cex:
        def val(comb_lit):
            if comb_lit <= 1:
                return bool(comb_lit)
            v = model[(comb_lit >> 1) + 1]
            return (not v) if comb_lit & 1 else v

        latch_init = [val(lit) for lit in self.builder.frame0_latches]
        inputs = [
            [val(lit) for lit in self.builder.frame_inputs[f]] for f in range(frames)
        ]
        return Cex(latch_init, inputs)


def _run(n: Netlist, props: list, cfg: BmcConfig, multiplier: int) -> ClusterVerdict:
    for p in props:
        if not 0 <= p < n.num_properties:
            raise PropertyIndexOutOfRange(f"property {p} of {n.num_properties}")
    props = sorted(props)
    meter = _CostMeter(cfg, multiplier)
    solver = satcore.new_solver(seed=cfg.seed)
    enc = _Encoder(n, cfg.mode, solver)

    verdicts: dict = {}
    refuted_to = {p: -1 for p in props}       # deepest refuted frame
    resolved_elapsed: dict = {}
    frame_stats: list = []
    frame_limit = cfg.max_frames
    if cfg.proof_bound is not None and frame_limit is None:
        frame_limit = cfg.proof_bound

    frame = 0
    stopped = False
    while not stopped:
        if frame_limit is not None and frame > frame_limit:
            break
        if all(p in verdicts for p in props):
            break
        if meter.exhausted():
            break
        bads = enc.add_frame()
        frame_conflicts = 0
        frame_cost = 0.0
        for p in props:
            if p in verdicts:
                continue
            if meter.exhausted():
                stopped = True
                break
            rem = meter.remaining()
            t0 = time.perf_counter()
            if meter.deterministic:
                budget = None if rem is None else max(0, int(rem) - 1)
                res = solver.solve([enc.slit(bads[p])], conflict_budget=budget)
            else:
                deadline = None if rem is None else time.perf_counter() + rem
                res = solver.solve([enc.slit(bads[p])], deadline=deadline)
            cost = meter.charge_call(res, time.perf_counter() - t0)
            frame_conflicts += res.conflicts_this_call
            frame_cost += cost
            if res.status == satcore.SAT:
                verdicts[p] = Verdict(
                    status=SAT,
                    depth=frame,
                    elapsed=meter.spent,
                    cex=enc.extract_cex(res.model, frame + 1),
                )
                resolved_elapsed[p] = meter.spent
            elif res.status == satcore.UNSAT:
                refuted_to[p] = frame
                if cfg.proof_bound is not None and frame >= cfg.proof_bound:
                    verdicts[p] = Verdict(
                        status=UNSAT, depth=cfg.proof_bound, elapsed=meter.spent
                    )
                    resolved_elapsed[p] = meter.spent
            else:
                stopped = True
                break
        frame_stats.append(
            FrameStat(
                frame=frame,
                conflicts=frame_conflicts,
                solve_time=frame_cost,
                cumulative_time=meter.spent,
            )
        )
        frame += 1

    for p in props:
        if p not in verdicts:
            verdicts[p] = Verdict(status=UNDET, depth=refuted_to[p], elapsed=meter.spent)
        verdicts[p].per_frame = frame_stats
    return ClusterVerdict(
        per_property=verdicts, per_frame=frame_stats, total_elapsed=meter.spent
    )


def check_single(n: Netlist, p: int, cfg: BmcConfig) -> Verdict:
    """Standalone BMC of one property under a 1x budget."""
    return _run(n, [p], cfg, multiplier=1).per_property[p]


def check_cluster(n: Netlist, cluster, cfg: BmcConfig) -> ClusterVerdict:
    """Shared-session BMC of a property cluster.

    The run's budget is the per-property budget times the cluster size.
    """
    cluster = sorted(set(cluster))
    if not cluster:
        raise EmptyCluster("cluster must be non-empty")
    return _run(n, cluster, cfg, multiplier=len(cluster))


def run_with_budget(n: Netlist, props, cfg: BmcConfig, total_budget) -> ClusterVerdict:
    """Cluster run with an explicitly allocated total budget (online phase)."""
    props = sorted(set(props))
    if not props:
        raise EmptyCluster("cluster must be non-empty")
    if cfg.deterministic:
        per = max(1, int(total_budget) // len(props)) if cfg.conflict_budget else None
        sub = BmcConfig(
            conflict_budget=per,
            max_frames=cfg.max_frames,
            mode=cfg.mode,
            seed=cfg.seed,
            proof_bound=cfg.proof_bound,
        )
    else:
        sub = BmcConfig(
            time_budget=max(total_budget / len(props), 1e-9),
            max_frames=cfg.max_frames,
            mode=cfg.mode,
            seed=cfg.seed,
            proof_bound=cfg.proof_bound,
        )
    return _run(n, props, sub, multiplier=len(props))


CONFIRMED = "confirmed"
REFUTED = "refuted"


def replay_cex(n: Netlist, p: int, cex: Cex) -> str:
    """Simulate a counterexample; confirmed iff bad p holds at the last frame."""
    if not 0 <= p < n.num_properties:
        raise PropertyIndexOutOfRange(f"property {p} of {n.num_properties}")
    if len(cex.inputs) < 1:
        raise ValueError("counterexample needs at least one frame")
    state = list(cex.latch_init)
    bad = False
    for frame_inputs in cex.inputs:
        _, state, bad_vals = n.eval_frame(state, frame_inputs)
        bad = bad_vals[p]
    return CONFIRMED if bad else REFUTED


def write_frame_csvs(per_frame, out_dir: str, run_id: str) -> list:
    """Per-run figure data: one x,y CSV per metric."""
    os.makedirs(out_dir, exist_ok=True)
    metrics = {
        "conflicts": lambda s: s.conflicts,
        "solve_time": lambda s: s.solve_time,
        "cumulative_time": lambda s: s.cumulative_time,
    }
    paths = []
    for name, getter in metrics.items():
        path = os.path.join(out_dir, f"{run_id}_{name}.csv")
        with open(path, "w") as fh:
            fh.write("x,y\n")
            for stat in per_frame:
                fh.write(f"{stat.frame},{getter(stat)!r}\n")
        paths.append(path)
    return paths
