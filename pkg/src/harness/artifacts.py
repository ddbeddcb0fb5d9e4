import hashlib
import json
import logging
import os
from typing import Any, Optional

logger = logging.getLogger(__name__)

# bump when stage result layouts or checked relations change
CACHE_SCHEMA = 2


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def stable_hash(obj: Any) -> str:
    return hashlib.md5(canonical_json(obj).encode("utf-8")).hexdigest()


class ArtifactStore:
    """
    JSON cache of selftest stage results, one file per (stage, key).

    Entries are stamped with the schema they were written under; an entry
    from another schema reads as a miss and is overwritten on the next save.
    """

    def __init__(self, root: str, schema: int = CACHE_SCHEMA):
        self.root = root
        self.schema = schema
        os.makedirs(self.root, exist_ok=True)

    def path(self, stage: str, key: str) -> str:
        return os.path.join(self.root, f"{stage}__{key}.json")

    def load(self, stage: str, key: str) -> Optional[Any]:
        p = self.path(stage, key)
        if not os.path.exists(p):
            logger.debug("cache miss: %s", p)
            return None
        with open(p, "r", encoding="utf-8") as fh:
            entry = json.load(fh)
        if not isinstance(entry, dict) or entry.get("schema") != self.schema:
            logger.info("stale cache entry %s (schema %s, want %s)", p,
                        entry.get("schema") if isinstance(entry, dict) else None, self.schema)
            return None
        logger.debug("cache hit: %s", p)
        return entry["result"]

    def save(self, stage: str, key: str, result: Any) -> Any:
        with open(self.path(stage, key), "w", encoding="utf-8") as fh:
            fh.write(canonical_json({"schema": self.schema, "stage": stage, "result": result}))
        return result
