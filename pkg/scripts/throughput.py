"""Random-vector functional check and simulator throughput at width 32."""

import argparse
import time
from dataclasses import dataclass

import numpy as np

from rtzsim.builders import FullAdderKind, build_rca
from rtzsim.cells import default_delays
from rtzsim.sim import run_transactions


@dataclass
class Config:
    width: int = 32
    vectors: int = 10_000
    seed: int = 20240101
    engine: str = "compiled"


def run(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    a = rng.integers(0, 2**cfg.width, cfg.vectors).tolist()
    b = rng.integers(0, 2**cfg.width, cfg.vectors).tolist()
    c = rng.integers(0, 2, cfg.vectors).tolist()
    ops = list(zip(a, b, c))
    d = default_delays()
    run_transactions(build_rca(1, "aopt-eo"), [(1, 1, 1)], d, engine=cfg.engine)  # warm-up
    for kind in FullAdderKind:
        t0 = time.perf_counter()
        tr, recs = run_transactions(build_rca(cfg.width, kind), ops, d, engine=cfg.engine)
        dt = time.perf_counter() - t0
        wrong = sum(r.sum + (r.cout << cfg.width) != r.a + r.b + r.cin for r in recs)
        print(f"{kind.value:12s} {dt:6.2f} s  {len(tr):9d} events  {len(tr) / dt / 1e6:5.2f} Mev/s  "
              f"wrong={wrong}  digest={tr.digest()[:16]}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--width", type=int, default=Config.width)
    ap.add_argument("--vectors", type=int, default=Config.vectors)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--engine", choices=("compiled", "python"), default=Config.engine)
    a = ap.parse_args(argv)
    run(Config(a.width, a.vectors, a.seed, a.engine))


if __name__ == "__main__":
    main()
