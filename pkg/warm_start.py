"""
Warm-start cache for mu-continuation
Keeps solved (k_M, lambda) per (q, mu) so the next solve starts nearby
"""

import os
import json
import logging
import threading
from dataclasses import dataclass, asdict
from typing import Dict, Iterable, Optional, Tuple

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WarmStartRecord:
    mu: float
    q: int
    mode: str
    k_M: float
    lam: float


class WarmStartCache:
    def __init__(self, cache_path: Optional[str] = None, records: Iterable[WarmStartRecord] = ()):
        self.cache_path = cache_path
        self._lock = threading.Lock()
        self._records: Dict[Tuple[int, float], WarmStartRecord] = {}
        self.cache_hits = 0
        self.cache_misses = 0
        for record in records:
            self._records[(record.q, record.mu)] = record
        if cache_path:
            self.load()

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)

    def load(self):
        """Load records from the JSON cache file, ignoring an unreadable file"""
        if not os.path.exists(self.cache_path):
            return
        try:
            with open(self.cache_path, "r") as f:
                payload = json.load(f)
            for item in payload.get("records", []):
                record = WarmStartRecord(float(item["mu"]), int(item["q"]), str(item["mode"]),
                                         float(item["k_M"]), float(item["lam"]))
                self._records[(record.q, record.mu)] = record
            logger.info("Loaded %d warm-start records from %s", len(self._records), self.cache_path)
        except (OSError, ValueError, KeyError, TypeError) as e:
            logger.warning("Ignoring warm-start cache %s: %s", self.cache_path, e)

    def save(self):
        """Write records to the JSON cache file (sorted, so the file is deterministic)"""
        if not self.cache_path:
            return
        with self._lock:
            items = [asdict(r) for _, r in sorted(self._records.items())]
        with open(self.cache_path, "w") as f:
            json.dump({"records": items}, f, indent=1)

    def put(self, record: WarmStartRecord):
        with self._lock:
            self._records[(record.q, record.mu)] = record

    def get(self, mu: float, q: int = 1) -> Optional[WarmStartRecord]:
        with self._lock:
            record = self._records.get((q, mu))
            if record is None:
                self.cache_misses += 1
            else:
                self.cache_hits += 1
            return record

    def get_nearest(self, mu: float, q: int = 1, modes: Optional[Iterable[str]] = None
                    ) -> Optional[WarmStartRecord]:
        """Record with the closest mu (ties towards the smaller mu)"""
        allowed = set(modes) if modes is not None else None
        with self._lock:
            candidates = [r for (rq, _), r in self._records.items()
                          if rq == q and (allowed is None or r.mode in allowed)]
            if not candidates:
                self.cache_misses += 1
                return None
            self.cache_hits += 1
            return min(candidates, key=lambda r: (abs(r.mu - mu), r.mu))

    def snapshot(self) -> "WarmStartCache":
        """Independent in-memory copy; workers read it without seeing each other's writes"""
        with self._lock:
            records = list(self._records.values())
        return WarmStartCache(None, records)

    def get_cache_stats(self) -> Dict:
        """Get cache performance statistics"""
        total = self.cache_hits + self.cache_misses
        hit_rate = (self.cache_hits / total * 100) if total > 0 else 0
        return {
            "cache_size": len(self),
            "cache_hits": self.cache_hits,
            "cache_misses": self.cache_misses,
            "hit_rate": f"{hit_rate:.1f}%",
        }
