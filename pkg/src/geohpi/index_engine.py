"""The stratified mix-adjusted median index pipeline.

Stages, in order:

1. voting: every record votes for its nearest neighbours; the least-voted
   share of the dataset (geographically isolated listings) is dropped.
2. ratio matrix: with every month as a stratification base, each base
   record is matched to its nearest neighbour in every earlier month and
   the median price ratio per month pair is recorded.
3. chaining: the index step from one month to the next is the mean change,
   across all shared earlier months, between the two months' ratios to
   those earlier months; steps accumulate from 100 at the first month.

Neighbour matching runs through the prefix tree; when bedroom factoring is
on, the bedroom count is prepended to each key so matching is restricted
to listings with the same number of bedrooms at the first tree branch.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from statistics import median
from typing import Iterable, Sequence

from .geocode import encode_geohash, make_geohash_plus
from .geotree import GeoTree
from .ingestion import ListingRecord

CHAIN_MODES = ("additive", "geometric")


class VotingUndefinedError(ValueError):
    """Voting needs at least two records."""


class ChainUndefinedError(ValueError):
    """Chaining needs at least two months."""


@dataclass(frozen=True)
class IndexConfig:
    votes_per_record: int = 1
    removal_fraction: float = 0.10
    factor_bedrooms: bool = False
    min_ratios_for_chain: int = 3
    geohash_precision: int = 7
    scb_min_population: int = 1
    chain_mode: str = "additive"

    def __post_init__(self) -> None:
        if self.votes_per_record < 1:
            raise ValueError("votes_per_record must be at least 1")
        if not 0.0 <= self.removal_fraction < 1.0:
            raise ValueError("removal_fraction must be in [0, 1)")
        if self.min_ratios_for_chain < 1:
            raise ValueError("min_ratios_for_chain must be at least 1")
        if not 1 <= self.geohash_precision <= 12:
            raise ValueError("geohash_precision must be in [1, 12]")
        if self.scb_min_population < 1:
            raise ValueError("scb_min_population must be at least 1")
        if self.chain_mode not in CHAIN_MODES:
            raise ValueError(f"chain_mode must be one of {CHAIN_MODES}")


@dataclass(frozen=True)
class RatioMatrix:
    """Median price ratios r_base(prior) for every base month and earlier month.

    Strictly lower-triangular: entries exist only for prior < base, and only
    when at least one base record found a neighbour in the prior month.
    ``months`` spans the full calendar range, including empty months.
    """

    months: tuple[str, ...]
    entries: dict[tuple[str, str], float]
    support: dict[tuple[str, str], int]

    def get(self, base: str, prior: str) -> float | None:
        return self.entries.get((base, prior))

    def rows(self) -> Iterable[tuple[str, str, float, int]]:
        for (base, prior) in sorted(self.entries):
            yield base, prior, self.entries[(base, prior)], self.support[(base, prior)]


@dataclass(frozen=True)
class IndexSeries:
    """Chained monthly index levels, first month pinned to 100."""

    months: tuple[str, ...]
    values: tuple[float, ...]
    flagged: tuple[bool, ...]

    @property
    def diffs(self) -> tuple[float, ...]:
        return tuple(
            self.values[i + 1] - self.values[i] for i in range(len(self.values) - 1)
        )


@dataclass(frozen=True)
class VotingSummary:
    total: int
    removed: int
    survivors: int


@dataclass(frozen=True)
class IndexResult:
    series: IndexSeries
    matrix: RatioMatrix
    voting: VotingSummary
    timings: dict[str, float] = field(default_factory=dict)


def record_key(record: ListingRecord, config: IndexConfig) -> str:
    """Tree key for a record: geohash, bedroom character prepended when factoring."""
    base = encode_geohash(record.point, config.geohash_precision)
    if config.factor_bedrooms:
        return make_geohash_plus(str(record.bedrooms), base).text
    return base.text


def key_length(config: IndexConfig) -> int:
    return config.geohash_precision + (1 if config.factor_bedrooms else 0)


def build_tree(
    records: Sequence[ListingRecord],
    config: IndexConfig,
    keys: dict[str, str] | None = None,
) -> GeoTree:
    """Build the month-grouped tree over ``records``; fills ``keys`` by id."""
    tree = GeoTree(key_length(config), group_key=lambda r: r.month_key)
    for r in records:
        key = record_key(r, config) if keys is None else keys[r.id]
        tree.insert(key, r)
    return tree


def _k_nearest(
    tree: GeoTree,
    key: str,
    record: ListingRecord,
    k: int,
    min_population: int,
) -> list[ListingRecord]:
    """The record's k nearest distinct neighbours, found one at a time."""
    excluded = {record.id}
    found: list[ListingRecord] = []
    for _ in range(k):
        neighbour = tree.nearest_in_group(
            key, record.point, exclude=excluded, min_population=min_population
        )
        if neighbour is None:
            break
        found.append(neighbour)
        excluded.add(neighbour.id)
    return found


def removal_count(fraction: float, total: int) -> int:
    # floor of the exact product; the epsilon keeps a float landing a hair
    # under an integer (0.29 * 100 == 28.999...96) from dropping one short
    return math.floor(fraction * total + 1e-9)


def voting_stage(
    records: Sequence[ListingRecord],
    tree: GeoTree,
    config: IndexConfig,
    keys: dict[str, str],
) -> list[ListingRecord]:
    """Drop the least-voted share of the dataset.

    Every record gives one vote to each of its ``votes_per_record`` nearest
    distinct neighbours (itself excluded); records are ranked by vote count
    and the lowest ``removal_fraction`` share is removed, ties at the
    cutoff broken by record id so the removed count is exact.
    """
    records = list(records)
    if len(records) < 2:
        raise VotingUndefinedError("voting needs at least two records")
    to_remove = removal_count(config.removal_fraction, len(records))
    if to_remove == 0:
        return records
    votes: dict[str, int] = {r.id: 0 for r in records}
    for r in records:
        for neighbour in _k_nearest(
            tree, keys[r.id], r, config.votes_per_record, config.scb_min_population
        ):
            votes[neighbour.id] += 1
    ranked = sorted(votes, key=lambda rid: (votes[rid], rid))
    removed = set(ranked[:to_remove])
    return [r for r in records if r.id not in removed]


def _add_months(month: str, count: int) -> str:
    year, mon = (int(part) for part in month.split("-"))
    idx = year * 12 + (mon - 1) + count
    return f"{idx // 12:04d}-{idx % 12 + 1:02d}"


def month_range(records: Iterable[ListingRecord]) -> list[str]:
    """Every calendar month from the earliest to the latest record, inclusive."""
    seen = {r.month_key for r in records}
    if not seen:
        return []
    months = [min(seen)]
    last = max(seen)
    while months[-1] != last:
        months.append(_add_months(months[-1], 1))
    return months


def build_ratio_matrix(
    records: Sequence[ListingRecord],
    tree: GeoTree,
    config: IndexConfig,
    keys: dict[str, str],
) -> RatioMatrix:
    """Median price ratio of every base month to every earlier month.

    For each record of the base month, its nearest neighbour listed in the
    earlier month is found through the tree and the price ratio
    record/neighbour is collected; the entry is the median of those ratios
    (mean of the two central values for even counts).  Month pairs with no
    matches stay absent.
    """
    months = month_range(records)
    by_month: dict[str, list[ListingRecord]] = {m: [] for m in months}
    for r in records:
        by_month[r.month_key].append(r)

    entries: dict[tuple[str, str], float] = {}
    support: dict[tuple[str, str], int] = {}
    for b_idx, base in enumerate(months):
        ratio_lists: list[list[float]] = [[] for _ in range(b_idx)]
        for record in by_month[base]:
            key = keys[record.id]
            for x_idx in range(b_idx):
                neighbour = tree.nearest_in_group(
                    key,
                    record.point,
                    months[x_idx],
                    min_population=config.scb_min_population,
                )
                if neighbour is not None:
                    ratio_lists[x_idx].append(record.price / neighbour.price)
        for x_idx, ratios in enumerate(ratio_lists):
            if ratios:
                entries[(base, months[x_idx])] = median(ratios)
                support[(base, months[x_idx])] = len(ratios)
    return RatioMatrix(tuple(months), entries, support)


def chain_index(matrix: RatioMatrix, config: IndexConfig) -> IndexSeries:
    """Chain the ratio matrix into a monthly index series based at 100.

    The step from month x to x+1 averages, over every earlier month both
    bases could be compared to, the change between the two bases' ratios to
    that earlier month.  The very first step has no shared history and uses
    the single ratio of month 2 to month 1 directly.  Steps with fewer than
    ``min_ratios_for_chain`` shared entries are flagged and contribute no
    change (the first step is only flagged when its ratio is absent).
    """
    months = matrix.months
    if len(months) < 2:
        raise ChainUndefinedError("chaining needs at least two months")
    geometric = config.chain_mode == "geometric"
    levels = [1.0]
    flagged = [False]
    for x_idx in range(len(months) - 1):
        nxt = months[x_idx + 1]
        cur = months[x_idx]
        flag = False
        if x_idx == 0:
            first = matrix.get(nxt, cur)
            if first is None:
                flag = True
                step = 1.0 if geometric else 0.0
            else:
                step = first if geometric else first - 1.0
        else:
            shared: list[float] = []
            for i in range(x_idx):
                r_next = matrix.get(nxt, months[i])
                r_cur = matrix.get(cur, months[i])
                if r_next is None or r_cur is None:
                    continue
                shared.append(r_next / r_cur if geometric else r_next - r_cur)
            if len(shared) < config.min_ratios_for_chain:
                flag = True
                step = 1.0 if geometric else 0.0
            else:
                step = sum(shared) / len(shared)
        levels.append(levels[-1] * step if geometric else levels[-1] + step)
        flagged.append(flag)
    values = tuple(100.0 * level for level in levels)
    return IndexSeries(tuple(months), values, tuple(flagged))


def compute_index(
    records: Sequence[ListingRecord], config: IndexConfig = IndexConfig()
) -> IndexResult:
    """Run the full pipeline: tree, voting, rebuilt tree, ratios, chaining.

    Deterministic for a fixed input order and config.
    """
    records = list(records)
    timings: dict[str, float] = {}
    keys = {r.id: record_key(r, config) for r in records}
    if len(keys) != len(records):
        raise ValueError("record ids must be unique")

    start = time.perf_counter()
    tree = build_tree(records, config, keys)
    timings["build_tree"] = time.perf_counter() - start

    start = time.perf_counter()
    survivors = voting_stage(records, tree, config, keys)
    timings["voting"] = time.perf_counter() - start

    start = time.perf_counter()
    if len(survivors) < len(records):
        tree = build_tree(survivors, config, keys)
    timings["rebuild_tree"] = time.perf_counter() - start

    start = time.perf_counter()
    matrix = build_ratio_matrix(survivors, tree, config, keys)
    timings["ratio_matrix"] = time.perf_counter() - start

    start = time.perf_counter()
    series = chain_index(matrix, config)
    timings["chain"] = time.perf_counter() - start

    voting = VotingSummary(
        total=len(records),
        removed=len(records) - len(survivors),
        survivors=len(survivors),
    )
    return IndexResult(series=series, matrix=matrix, voting=voting, timings=timings)
