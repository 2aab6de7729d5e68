"""Seeded random sweeps over skew-symmetrizable matrices.

Randomness comes from Python's :class:`random.Random`, the Mersenne Twister
MT19937.  The scan seed drives a master generator that hands each sample its
own 64-bit seed (``getrandbits(64)``), so a sample's matrix and words depend only
on the scan seed and the sample's index.  Results are therefore the same with
any number of worker processes.

Matrix generation, for rank ``n`` and entry bound ``m``: for each pair
``i < j`` in row-major order draw ``b_ij`` uniformly from ``[-m, m]``; if it is
nonzero draw a magnitude uniformly from ``[1, m]`` and give ``b_ji`` the opposite
sign, otherwise ``b_ji = 0``.  Redraw the whole matrix until it admits a
skew-symmetrizer.

Random words: length uniform in ``[0, max_depth]``, first direction uniform in
``[1, n]``, each later direction uniform among the ``n - 1`` directions that
differ from its predecessor.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterator

from .errors import NotSkewSymmetrizable, TropdualError
from .matrix import ExchangeMatrix, IntMat, find_skew_symmetrizer
from .pattern import Walker, count_words, words_up_to
from .verdict import FAIL, PASS, STATUSES, VIOLATED
from .verify import ALL_CHECKS, run_checks

SCAN_CHECKS = ("theorem", "auxiliary", "sign-coherence", "step-left", "tropical", "recurrences")
GENERATOR = "MT19937 (Python random.Random), per-sample seeds from getrandbits(64)"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScanConfig:
    rank: int
    max_entry: int
    samples: int
    max_depth: int
    strategy: str = "random"
    seed: int = 0
    words: int = 200
    min_rank: int | None = None
    budget: int = 100_000
    checks: tuple[str, ...] = SCAN_CHECKS

    def __post_init__(self):
        lo = self.rank if self.min_rank is None else self.min_rank
        if not 1 <= lo <= self.rank:
            raise ConfigError(f"need 1 <= min_rank <= rank, got {lo} and {self.rank}")
        if self.max_entry < 1:
            raise ConfigError("max_entry must be at least 1")
        if self.samples < 0 or self.max_depth < 0 or self.words < 0:
            raise ConfigError("samples, max_depth and words must be nonnegative")
        if self.strategy not in ("random", "exhaustive"):
            raise ConfigError(f"strategy must be 'random' or 'exhaustive', not {self.strategy!r}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        unknown = [c for c in self.checks if c not in ALL_CHECKS]
        if unknown:
            raise ConfigError(f"unknown checks {unknown}")
        per_sample = self.words_per_sample(self.rank)
        if per_sample * max(1, len(self.checks)) > self.budget:
            raise ConfigError(
                f"{per_sample} words x {len(self.checks)} checks per sample exceeds budget {self.budget}"
            )

    @property
    def lowest_rank(self) -> int:
        return self.rank if self.min_rank is None else self.min_rank

    def words_per_sample(self, n: int) -> int:
        if self.strategy == "exhaustive":
            return count_words(n, self.max_depth)
        return self.words

    def to_json(self) -> dict:
        d = asdict(self)
        d["checks"] = list(self.checks)
        d["min_rank"] = self.lowest_rank
        return d


def random_exchange_matrix(rng: random.Random, n: int, bound: int) -> ExchangeMatrix:
    while True:
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                v = rng.randint(-bound, bound)
                if v:
                    rows[i][j] = v
                    rows[j][i] = -rng.randint(1, bound) if v > 0 else rng.randint(1, bound)
        b = IntMat(rows)
        try:
            return ExchangeMatrix(b, find_skew_symmetrizer(b))
        except NotSkewSymmetrizable:
            continue


def random_word(rng: random.Random, n: int, max_depth: int) -> tuple[int, ...]:
    length = rng.randint(0, max_depth)
    if n == 1:
        length = min(length, 1)
    word: list[int] = []
    for _ in range(length):
        if not word:
            word.append(rng.randint(1, n))
        else:
            k = rng.randint(1, n - 1)
            word.append(k + 1 if k >= word[-1] else k)
    return tuple(word)


def sample_seeds(seed: int, count: int) -> list[int]:
    master = random.Random(seed)
    return [master.getrandbits(64) for _ in range(count)]


def _sample_words(cfg: ScanConfig, rng: random.Random, n: int) -> Iterator[tuple[int, ...]]:
    if cfg.strategy == "exhaustive":
        return words_up_to(n, cfg.max_depth)
    return iter([random_word(rng, n, cfg.max_depth) for _ in range(cfg.words)])


def run_sample(cfg: ScanConfig, index: int, sample_seed: int) -> dict:
    rng = random.Random(sample_seed)
    n = rng.randint(cfg.lowest_rank, cfg.rank)
    b0 = random_exchange_matrix(rng, n, cfg.max_entry)
    words = list(_sample_words(cfg, rng, n))
    walker = Walker(b0, track_f="conjecture41" in cfg.checks or "separation" in cfg.checks)
    report = run_checks(b0, words, cfg.checks, walker=walker)

    # nonempty words that return C and G to the identity
    periodic = []
    ident = IntMat.identity(n)
    for w in sorted(set(words), key=lambda w: (len(w), w)):
        if not w:
            continue
        try:
            p = walker.point(w)
        except TropdualError:
            continue
        if p.c == ident and p.g == ident:
            periodic.append(list(w))

    out = {"index": index, "seed": sample_seed, "rank": n, "matrix": b0.to_json(), "words": len(words)}
    out.update(report.to_json())
    out["periodic_words"] = periodic
    return out


def run_scan(cfg: ScanConfig, jobs: int = 1) -> dict:
    seeds = sample_seeds(cfg.seed, cfg.samples)
    if jobs > 1 and cfg.samples > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(run_sample, cfg, i, s) for i, s in enumerate(seeds)]
            samples = [f.result() for f in futures]
    else:
        samples = [run_sample(cfg, i, s) for i, s in enumerate(seeds)]

    tallies: dict[str, dict[str, int]] = {}
    for s in samples:
        for name, counts in s["tallies"].items():
            acc = tallies.setdefault(name, dict.fromkeys(STATUSES, 0))
            for st, v in counts.items():
                acc[st] += v
    statuses = {s["status"] for s in samples}
    status = next((st for st in (FAIL, VIOLATED) if st in statuses), PASS)
    return {
        "config": cfg.to_json(),
        "generator": GENERATOR,
        "summary": {
            "status": status,
            "samples": len(samples),
            "tallies": {k: tallies[k] for k in sorted(tallies)},
            "samples_with_problems": [s["index"] for s in samples if s["status"] != "pass"],
        },
        "samples": samples,
    }
