"""Named worked-example instances, shipped as schema-1 JSON under assets/v1."""
from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List

from src.cli.codec import decode
from src.lattice.errors import UsageError

ASSETS_DIR = Path(__file__).resolve().parent / "assets" / "v1"

# stored as raw points; fails the exchange axiom on purpose
UNVERIFIED = frozenset({"nonregular_linking"})


def fixture_names() -> List[str]:
    return sorted(p.stem for p in ASSETS_DIR.glob("*.json"))


def fixture_document(name: str) -> Dict[str, Any]:
    path = ASSETS_DIR / f"{name}.json"
    if not path.exists():
        raise UsageError(f"unknown fixture {name!r}; available: {fixture_names()}")
    return json.loads(path.read_text(encoding="utf-8"))


@lru_cache(maxsize=None)
def load_fixture(name: str):
    return decode(fixture_document(name), verify=name not in UNVERIFIED)


def fixtures() -> Dict[str, Any]:
    return {name: load_fixture(name) for name in fixture_names()}
