"""Carry-propagation chain statistics for random operands."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np

from ..builders import FullAdderKind, build_rca
from ..cells import DelayModel
from ..errors import DomainError
from ..netlist import GateKind

CHUNK = 8192


@dataclass
class ChainStats:
    width: int
    samples: int
    seed: int | None
    histogram: np.ndarray  # counts of longest active chain, index 0..width
    propagate_histogram: np.ndarray  # counts of longest plain propagate run

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(self.width + 1), self.histogram) / self.samples)

    @property
    def propagate_mean(self) -> float:
        return float(np.dot(np.arange(self.width + 1), self.propagate_histogram) / self.samples)

    def fraction_le(self, k: int) -> float:
        return float(self.histogram[: k + 1].sum() / self.samples)

    @property
    def fractions(self) -> dict[int, float]:
        return {k: self.fraction_le(k) for k in range(1, self.width + 1)}

    def distribution(self) -> dict[int, int]:
        return {k: int(c) for k, c in enumerate(self.histogram) if c}

    def to_csv(self) -> str:
        lines = ["length,count,fraction,cumulative,propagate_count"]
        cum = 0
        for k in range(self.width + 1):
            c = int(self.histogram[k])
            cum += c
            lines.append(f"{k},{c},{c / self.samples:.6f},{cum / self.samples:.6f},"
                         f"{int(self.propagate_histogram[k])}")
        return "\n".join(lines) + "\n"


def longest_chains(a: np.ndarray, b: np.ndarray, cin: np.ndarray | None = None):
    """Per-sample longest active chain and longest propagate run.

    ``a`` and ``b`` are (samples, width) bit arrays, bit 0 first.  An active
    chain starts at a generating stage (or an asserted carry-in, counted as
    the generator) and extends over the consecutive propagating stages above
    it; its length counts the generator and the propagates.
    """
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    s, n = a.shape
    g = a & b
    p = a ^ b
    cur = np.zeros(s, dtype=np.int64) if cin is None else np.asarray(cin, dtype=np.int64).copy()
    run = np.zeros(s, dtype=np.int64)
    best = np.zeros(s, dtype=np.int64)
    best_run = np.zeros(s, dtype=np.int64)
    for i in range(n):
        cur = np.where(g[:, i], 1, np.where(p[:, i] & (cur > 0), cur + 1, 0))
        run = np.where(p[:, i], run + 1, 0)
        np.maximum(best, cur, out=best)
        np.maximum(best_run, run, out=best_run)
    return best, best_run


def _chunk(args):
    width, count, seed_seq = args
    rng = np.random.default_rng(seed_seq)
    a = rng.integers(0, 2, size=(count, width), dtype=np.int8)
    b = rng.integers(0, 2, size=(count, width), dtype=np.int8)
    best, run = longest_chains(a, b)
    return (np.bincount(best, minlength=width + 1), np.bincount(run, minlength=width + 1))


def carry_chain_stats(width: int, samples: int, seed: int, workers: int = 1) -> ChainStats:
    """Monte Carlo statistics over uniform operands with carry-in 0.

    Samples are drawn in fixed-size chunks, each from its own spawned seed,
    so results do not depend on ``workers``.
    """
    if width < 1:
        raise DomainError("width must be >= 1")
    if samples < 1:
        raise DomainError("samples must be >= 1")
    sizes = [CHUNK] * (samples // CHUNK)
    if samples % CHUNK:
        sizes.append(samples % CHUNK)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(width, c, s) for c, s in zip(sizes, seeds)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_chunk, jobs))
    else:
        parts = [_chunk(j) for j in jobs]
    hist = sum(p[0] for p in parts)
    prop = sum(p[1] for p in parts)
    return ChainStats(width, samples, seed, hist, prop)


def _all_operands(width):
    bits = np.array(list(product((0, 1), repeat=width)), dtype=np.int8)[:, ::-1]
    ia = np.repeat(np.arange(len(bits)), len(bits))
    ib = np.tile(np.arange(len(bits)), len(bits))
    return bits[ia], bits[ib]


def exhaustive_chain_distribution(width: int) -> dict[int, int]:
    """Longest-active-chain histogram over every operand pair (carry-in 0)."""
    if width > 10:
        raise DomainError("exhaustive enumeration limited to width <= 10")
    a, b = _all_operands(width)
    best, _ = longest_chains(a, b)
    vals, counts = np.unique(best, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def trace_chain_distribution(width: int, delays: DelayModel | None = None) -> dict[int, int]:
    """Same histogram measured from simulated carry-rail timing.

    Every operand pair is run through an AOPT ripple-carry adder in which
    only carry-generate and carry-propagate cells (AO22) take time.  The
    true carry rail of stage i rises one AO22 delay per stage of its chain,
    so its rise time divided by that delay is the chain length there.
    """
    from ..sim import run_transactions

    if delays is None:
        delays = DelayModel.uniform()
    unit = delays[GateKind.AO22]
    system = build_rca(width, FullAdderKind.AOPT_EO)
    ops = [(a, b, 0) for a in range(2**width) for b in range(2**width)]
    trace, records = run_transactions(system, ops, delays)
    carry_rails = {f"c{i}.1" for i in range(1, width + 1)}
    best = {r.txn: 0 for r in records}
    for r in records:
        end = r.spacer_time
        for w in carry_rails:
            for e in trace.by_wire.get(w, ()):
                if r.valid_time <= e.time < end and e.value == 1:
                    t = e.time - r.valid_time
                    if t % unit:
                        raise AssertionError(f"carry rise at {t} ps is not a multiple of {unit}")
                    best[r.txn] = max(best[r.txn], t // unit)
    out: dict[int, int] = {}
    for v in best.values():
        out[v] = out.get(v, 0) + 1
    return dict(sorted(out.items()))
