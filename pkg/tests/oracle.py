"""Exhaustive reference implementations used to check the real pipeline.

Everything here works by linear scans over flat lists: buckets are found
by comparing key prefixes directly, neighbours by scanning whole buckets,
and the index stages are re-derived from scratch with their own median and
mean code.  No prefix tree is involved anywhere, so agreement with the
production path is meaningful.  The shared primitives (geohash encoding
and the haversine distance) are part of the neighbour definition itself
and are verified independently in the geocode tests.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from geohpi import GeoPoint, encode_geohash, haversine_distance
from geohpi.index_engine import IndexConfig
from geohpi.ingestion import ListingRecord


def oracle_key(record: ListingRecord, config: IndexConfig) -> str:
    base = encode_geohash(record.point, config.geohash_precision).text
    return (str(record.bedrooms) + base) if config.factor_bedrooms else base


def scb_scan(
    records: Sequence,
    keys: dict[str, str],
    query_key: str,
    min_population: int,
) -> tuple[list, int]:
    """Deepest prefix bucket of the query meeting the population threshold."""
    for depth in range(len(query_key), -1, -1):
        prefix = query_key[:depth]
        bucket = [r for r in records if keys[r.id].startswith(prefix)]
        if len(bucket) >= min_population:
            return bucket, depth
    return list(records), 0


def nearest_scan(
    records: Sequence,
    keys: dict[str, str],
    query_key: str,
    point: GeoPoint,
    month: str | None = None,
    exclude: frozenset[str] = frozenset(),
    min_population: int = 1,
):
    """Nearest group member in the deepest prefix bucket meeting the threshold."""
    def in_group(r) -> bool:
        return (month is None or r.month_key == month) and r.id not in exclude

    chosen = None
    for depth in range(len(query_key), -1, -1):
        prefix = query_key[:depth]
        bucket = [r for r in records if keys[r.id].startswith(prefix) and in_group(r)]
        if len(bucket) >= min_population:
            chosen = bucket
            break
    if chosen is None:
        chosen = [r for r in records if in_group(r)]
        if not chosen:
            return None
    return min(chosen, key=lambda r: (haversine_distance(point, r.point), r.id))


def median_scan(values: Iterable[float]) -> float:
    ordered = sorted(values)
    n = len(ordered)
    mid = n // 2
    if n % 2:
        return ordered[mid]
    return (ordered[mid - 1] + ordered[mid]) / 2


def months_scan(records: Sequence[ListingRecord]) -> list[str]:
    present = sorted({r.month_key for r in records})
    year, month = (int(p) for p in present[0].split("-"))
    last_year, last_month = (int(p) for p in present[-1].split("-"))
    out = []
    while (year, month) <= (last_year, last_month):
        out.append(f"{year:04d}-{month:02d}")
        month += 1
        if month == 13:
            year += 1
            month = 1
    return out


def voting_scan(
    records: Sequence[ListingRecord],
    keys: dict[str, str],
    config: IndexConfig,
) -> list[ListingRecord]:
    to_remove = math.floor(config.removal_fraction * len(records) + 1e-9)
    if to_remove == 0:
        return list(records)
    votes = {r.id: 0 for r in records}
    for r in records:
        excluded = {r.id}
        for _ in range(config.votes_per_record):
            neighbour = nearest_scan(
                records,
                keys,
                keys[r.id],
                r.point,
                exclude=frozenset(excluded),
                min_population=config.scb_min_population,
            )
            if neighbour is None:
                break
            votes[neighbour.id] += 1
            excluded.add(neighbour.id)
    ranked = sorted(votes, key=lambda rid: (votes[rid], rid))
    removed = set(ranked[:to_remove])
    return [r for r in records if r.id not in removed]


def matrix_scan(
    records: Sequence[ListingRecord],
    keys: dict[str, str],
    config: IndexConfig,
) -> tuple[list[str], dict[tuple[str, str], float], dict[tuple[str, str], int]]:
    months = months_scan(records)
    entries: dict[tuple[str, str], float] = {}
    support: dict[tuple[str, str], int] = {}
    for b_idx, base in enumerate(months):
        base_records = [r for r in records if r.month_key == base]
        for x_idx in range(b_idx):
            prior = months[x_idx]
            ratios = []
            for record in base_records:
                neighbour = nearest_scan(
                    records,
                    keys,
                    keys[record.id],
                    record.point,
                    month=prior,
                    min_population=config.scb_min_population,
                )
                if neighbour is not None:
                    ratios.append(record.price / neighbour.price)
            if ratios:
                entries[(base, prior)] = median_scan(ratios)
                support[(base, prior)] = len(ratios)
    return months, entries, support


def chain_scan(
    months: Sequence[str],
    entries: dict[tuple[str, str], float],
    config: IndexConfig,
) -> tuple[list[float], list[bool]]:
    geometric = config.chain_mode == "geometric"
    levels = [1.0]
    flagged = [False]
    for x_idx in range(len(months) - 1):
        nxt, cur = months[x_idx + 1], months[x_idx]
        flag = False
        if x_idx == 0:
            first = entries.get((nxt, cur))
            if first is None:
                flag, step = True, (1.0 if geometric else 0.0)
            else:
                step = first if geometric else first - 1.0
        else:
            shared = []
            for i in range(x_idx):
                r_next = entries.get((nxt, months[i]))
                r_cur = entries.get((cur, months[i]))
                if r_next is None or r_cur is None:
                    continue
                shared.append(r_next / r_cur if geometric else r_next - r_cur)
            if len(shared) < config.min_ratios_for_chain:
                flag, step = True, (1.0 if geometric else 0.0)
            else:
                step = sum(shared) / len(shared)
        levels.append(levels[-1] * step if geometric else levels[-1] + step)
        flagged.append(flag)
    return [100.0 * level for level in levels], flagged


def pipeline_scan(records: Sequence[ListingRecord], config: IndexConfig):
    """Full reference pipeline; returns (months, values, flagged, entries)."""
    keys = {r.id: oracle_key(r, config) for r in records}
    survivors = voting_scan(records, keys, config)
    months, entries, support = matrix_scan(survivors, keys, config)
    values, flagged = chain_scan(months, entries, config)
    return months, values, flagged, entries, support
