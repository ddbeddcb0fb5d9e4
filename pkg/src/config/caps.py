from __future__ import annotations

import logging
import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, Mapping, Optional

import yaml

from src.lattice.errors import UsageError

logger = logging.getLogger(__name__)

CAPS_ENV = "MCQ_CAPS"


@dataclass(frozen=True)
class Caps:
    """
    Size caps for the factorial and exponential sweeps.

      vertex_sweep_n:    n! greedy-vertex sweeps (characterization 2, vertex_set)
      lift_sweep_v:      |V|! orderings of a lifted ground set (characterization 10)
      lift_membership_v: |V| for lifts used only through membership / exchange
      atlas_pairs:       |dom f| * |dom g| for minimizer atlases
      lift_pairs:        |M| * |N| for the exchange check on lifted matroids
      rejection_draws:   draws before a rejection sampler gives up
    """
    vertex_sweep_n: int = 8
    lift_sweep_v: int = 9
    lift_membership_v: int = 16
    atlas_pairs: int = 2000
    lift_pairs: int = 250000
    rejection_draws: int = 10000

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


DEFAULT_CAPS = Caps()


def parse_overrides(text: Optional[str]) -> Dict[str, Any]:
    """`{vertex_sweep_n: 6, atlas_pairs: 500}` (any YAML mapping)."""
    if not text:
        return {}
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise UsageError(f"caps override is not valid YAML: {text!r}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise UsageError(f"caps override must be a mapping, got {text!r}")
    return data


def apply_overrides(caps: Caps, overrides: Mapping[str, Any]) -> Caps:
    known = {f.name for f in fields(Caps)}
    unknown = sorted(set(overrides) - known)
    if unknown:
        raise UsageError(f"unknown caps keys: {unknown}")
    clean = {}
    for k, v in overrides.items():
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise UsageError(f"cap {k} must be a nonnegative integer, got {v!r}")
        clean[k] = v
    return replace(caps, **clean)


def load_caps(
    path: Optional[str] = None,
    override: Optional[str] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> Caps:
    """
    Defaults, then the YAML file at `path`, then $MCQ_CAPS, then `override`.
    """
    caps = DEFAULT_CAPS
    if path:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = yaml.safe_load(fh) or {}
        except OSError as exc:
            raise UsageError(f"cannot read caps file {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError(f"caps file {path} must hold a mapping")
        caps = apply_overrides(caps, data.get("caps", data))
    environ = os.environ if environ is None else environ
    env_text = environ.get(CAPS_ENV)
    if env_text:
        logger.debug("caps override from %s: %s", CAPS_ENV, env_text)
        caps = apply_overrides(caps, parse_overrides(env_text))
    caps = apply_overrides(caps, parse_overrides(override))
    return caps
