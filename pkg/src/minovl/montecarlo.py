"""Seeded Monte Carlo estimates of minimal-overlap proportions.

Every estimate records the RNG algorithm, seed and worker count, so a run can
be replayed exactly. With ``workers > 1`` the samples are split across
independent substreams spawned from the seed.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .fillings import RNG_ID, Filling, PatternClass, make_rng, random_sigmas, random_syt
from .patterns import is_minimal, minimal_mask

BATCH = 20_000
# finite widths standing in for n -> infinity
PROXY_N = {1: 20}
PROXY_N_DEFAULT = 10


def proxy_width(k: int) -> int:
    return PROXY_N.get(k, PROXY_N_DEFAULT)


@dataclass(frozen=True)
class McEstimate:
    target: str
    samples: int
    hits: int
    seed: int
    workers: int = 1
    rng: str = RNG_ID

    @property
    def mean(self) -> float:
        return self.hits / self.samples

    @property
    def stderr(self) -> float:
        m = self.mean
        return math.sqrt(m * (1 - m) / self.samples)

    @property
    def ci95(self) -> tuple[float, float]:
        return self.interval(1.96)

    def interval(self, z: float) -> tuple[float, float]:
        return (self.mean - z * self.stderr, self.mean + z * self.stderr)

    def to_json(self) -> dict:
        out = asdict(self)
        out.update(mean=self.mean, stderr=self.stderr, ci95=list(self.ci95))
        return out


def _split(samples: int, workers: int) -> list[int]:
    base, extra = divmod(samples, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def _count_hits(kind: str, n: int, k: int, m: int, samples: int, seed_seq) -> int:
    rng = make_rng(seed_seq)
    hits = 0
    if kind == "syt":
        for _ in range(samples):
            hits += is_minimal(random_syt(n, k, rng), PatternClass.STANDARD_RECT)
        return hits
    left = samples
    while left:
        size = min(BATCH, left)
        if kind == "a":
            sig = random_sigmas(n, k, size, rng)
        else:
            # first entry fixed to m, the rest a uniform arrangement of the others
            rest = np.array([v for v in range(1, n + 1) if v != m])
            tail = rng.permuted(np.tile(rest, (size, 1)), axis=1)
            sig = np.hstack([np.full((size, 1), m), tail])
        hits += int(minimal_mask(sig, k).sum())
        left -= size
    return hits


def _run(kind: str, target: str, n: int, k: int, m: int, samples: int, seed: int, workers: int) -> McEstimate:
    if samples < 1:
        raise ValueError("samples must be positive")
    if workers < 1:
        raise ValueError("workers must be positive")
    if workers == 1:
        hits = _count_hits(kind, n, k, m, samples, np.random.SeedSequence(seed))
    else:
        children = np.random.SeedSequence(seed).spawn(workers)
        with ProcessPoolExecutor(workers) as pool:
            futures = [
                pool.submit(_count_hits, kind, n, k, m, share, child)
                for share, child in zip(_split(samples, workers), children)
            ]
            hits = sum(f.result() for f in futures)
    return McEstimate(target, samples, hits, seed, workers)


def estimate_a(n: int, k: int, samples: int, seed: int, workers: int = 1) -> McEstimate:
    """Fraction of uniform members of F_{n,k} that are minimal overlapping."""
    return _run("a", f"a({n},{k})", n, k, 0, samples, seed, workers)


def estimate_b(n: int, k: int, samples: int, seed: int, workers: int = 1) -> McEstimate:
    """Same, over uniform standard tableaux of the k x n rectangle."""
    return _run("syt", f"b({n},{k})", n, k, 0, samples, seed, workers)


def estimate_prefix(n: int, m: int, samples: int, seed: int, workers: int = 1) -> McEstimate:
    """Fraction minimal among permutations of S_n starting with m."""
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in 1..{n}")
    return _run("prefix", f"prefix({n},m={m})", n, 1, m, samples, seed, workers)


def sample_fillings(n: int, k: int, count: int, seed: int) -> list[Filling]:
    rng = make_rng(seed)
    return [Filling.from_sigma(tuple(int(v) for v in row), k) for row in random_sigmas(n, k, count, rng)]
