"""Batch heuristic runs over plantri corpora, mirroring the experiment table."""

from __future__ import annotations

import time
from dataclasses import dataclass
from multiprocessing import Pool

from .graphs import Graph, find_clique, parse_plantri_ascii
from .heuristics import COLORED, FAILED, SolverError, heuristic1, heuristic2

LONG_MODE_THRESHOLD = 11  # corpora with larger graphs require explicit opt-in
NO_K4 = "no-k4"


@dataclass(frozen=True)
class BatchRow:
    index: int  # 0-based position in the corpus file
    n: int
    has_k4: bool
    algo: int
    status: str
    solves: int
    seconds: float


@dataclass(frozen=True)
class BatchReport:
    algo: int
    filter_k4: bool
    rows: tuple

    def aggregates(self) -> list:
        """Per-n (n, graphs, failures, rate) in ascending n; row sums by design."""
        by_n: dict = {}
        for row in self.rows:
            graphs, failures = by_n.get(row.n, (0, 0))
            by_n[row.n] = (graphs + 1, failures + (row.status != COLORED))
        out = []
        for n in sorted(by_n):
            graphs, failures = by_n[n]
            out.append((n, graphs, failures, failures / graphs))
        return out

    @property
    def failure_count(self) -> int:
        return sum(1 for row in self.rows if row.status != COLORED)


def _run_one(args):
    index, n, edges, algo, max_solves = args
    g = Graph(n, frozenset(edges))
    start = time.perf_counter()
    runner = heuristic1 if algo == 1 else heuristic2
    try:
        outcome = runner(g, max_solves=max_solves)
        status, solves = outcome.status, outcome.solve_count
    except SolverError:
        status, solves = "solver-error", 0
    elapsed = time.perf_counter() - start
    return BatchRow(index, n, True, algo, status, solves, elapsed)


def _read_checkpoint(path) -> dict:
    done: dict = {}
    try:
        with open(path) as fh:
            for line in fh:
                fields = line.split()
                if len(fields) >= 2:
                    done[int(fields[0])] = fields[1]
    except FileNotFoundError:
        pass
    return done


def run_batch(corpus_text: str, algo: int, filter_k4: bool = True,
              jobs: int = 1, long_mode: bool = False,
              max_solves: int | None = None,
              checkpoint: str | None = None) -> BatchReport:
    """Run one heuristic over every graph of a plantri corpus.

    Graphs without a K_4 are dropped when filter_k4 is set (the experiment
    counts cover only graphs with one); otherwise they appear with status
    "no-k4". Row order follows file order regardless of the worker pool, so
    reports are deterministic. Corpora containing graphs with more than 11
    vertices are refused unless long_mode is set.
    """
    if algo not in (1, 2):
        raise ValueError("algo must be 1 or 2")
    graphs = parse_plantri_ascii(corpus_text)
    if not long_mode and any(g.n > LONG_MODE_THRESHOLD for g in graphs):
        raise ValueError(
            f"corpus has graphs with n > {LONG_MODE_THRESHOLD}; pass long_mode"
        )
    done = _read_checkpoint(checkpoint) if checkpoint else {}

    skipped_rows = []
    tasks = []
    for index, g in enumerate(graphs):
        has_k4 = find_clique(g, 4) is not None
        if not has_k4:
            if not filter_k4:
                skipped_rows.append(BatchRow(index, g.n, False, algo, NO_K4, 0, 0.0))
            continue
        if index in done:
            skipped_rows.append(
                BatchRow(index, g.n, True, algo, done[index], 0, 0.0)
            )
            continue
        tasks.append((index, g.n, tuple(g.edges), algo, max_solves))

    if jobs > 1 and len(tasks) > 1:
        with Pool(processes=jobs) as pool:
            fresh = pool.map(_run_one, tasks, chunksize=1)
    else:
        fresh = [_run_one(t) for t in tasks]

    if checkpoint:
        with open(checkpoint, "a") as fh:
            for row in fresh:
                fh.write(f"{row.index} {row.status}\n")

    rows = tuple(sorted(skipped_rows + fresh, key=lambda r: r.index))
    return BatchReport(algo, filter_k4, rows)


def emit_report(report: BatchReport, format: str = "text") -> str:
    """Render a batch report; text mirrors the experiment table, csv is per row."""
    if format == "csv":
        lines = ["index,n,has_k4,algo,status,solves,seconds"]
        for r in report.rows:
            lines.append(
                f"{r.index},{r.n},{int(r.has_k4)},{r.algo},{r.status},"
                f"{r.solves},{r.seconds:.3f}"
            )
        return "\n".join(lines) + "\n"
    if format != "text":
        raise ValueError(f"unknown report format {format!r}")
    header = f"{'n':>3} {'graphs':>7} {'failures':>9} {'rate':>8}   (heuristic {report.algo})"
    lines = [header]
    total_graphs = total_failures = 0
    for n, graphs, failures, rate in report.aggregates():
        lines.append(f"{n:>3} {graphs:>7} {failures:>9} {rate:>8.4f}")
        total_graphs += graphs
        total_failures += failures
    if total_graphs:
        lines.append(
            f"{'all':>3} {total_graphs:>7} {total_failures:>9}"
            f" {total_failures / total_graphs:>8.4f}"
        )
    return "\n".join(lines) + "\n"
