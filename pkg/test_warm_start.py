#!/usr/bin/env python3
"""Tests for the warm-start cache"""

import json
from concurrent.futures import ThreadPoolExecutor

import pytest

from warm_start import WarmStartCache, WarmStartRecord


def record(mu, mode="segments", q=1):
    return WarmStartRecord(mu, q, mode, 1.0 + mu, mu - 0.5)


def test_exact_and_nearest_lookup():
    cache = WarmStartCache(records=[record(3.5, "strict"), record(4.0), record(5.0)])
    assert cache.get(4.0) == record(4.0)
    assert cache.get(4.1) is None
    assert cache.get_nearest(4.4).mu == 4.0
    assert cache.get_nearest(4.5).mu == 4.0  # ties go to the smaller mu
    assert cache.get_nearest(3.6, modes=("segments",)).mu == 4.0
    assert cache.get_nearest(4.0, q=2) is None


def test_stats():
    cache = WarmStartCache(records=[record(4.0)])
    cache.get(4.0)
    cache.get(9.0)
    stats = cache.get_cache_stats()
    assert stats["cache_size"] == 1
    assert stats["cache_hits"] == 1 and stats["cache_misses"] == 1
    assert stats["hit_rate"] == "50.0%"


def test_snapshot_is_independent():
    cache = WarmStartCache(records=[record(4.0)])
    frozen = cache.snapshot()
    cache.put(record(6.0))
    assert len(frozen) == 1
    assert len(cache) == 2


def test_json_persistence(tmp_path):
    path = str(tmp_path / "seeds.json")
    cache = WarmStartCache(path)
    cache.put(record(8.0))
    cache.put(record(4.0, "strict"))
    cache.save()
    payload = json.loads(open(path).read())
    assert [r["mu"] for r in payload["records"]] == [4.0, 8.0]
    reloaded = WarmStartCache(path)
    assert reloaded.get(4.0) == record(4.0, "strict")


def test_unreadable_file_is_ignored(tmp_path):
    path = tmp_path / "seeds.json"
    path.write_text("{not json")
    assert len(WarmStartCache(str(path))) == 0


def test_concurrent_writers():
    cache = WarmStartCache()
    with ThreadPoolExecutor(max_workers=8) as pool:
        list(pool.map(lambda i: cache.put(record(1.0 + i / 100)), range(400)))
    assert len(cache) == 400


if __name__ == "__main__":
    pytest.main([__file__])
