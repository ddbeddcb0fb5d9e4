from pathlib import Path

import pytest

from src.config.caps import CAPS_ENV, DEFAULT_CAPS, Caps, apply_overrides, load_caps, parse_overrides
from src.lattice.errors import UsageError

REPO = Path(__file__).resolve().parents[1]


def test_defaults():
    assert DEFAULT_CAPS.vertex_sweep_n == 8
    assert DEFAULT_CAPS.atlas_pairs == 2000
    assert DEFAULT_CAPS.rejection_draws == 10000


def test_shipped_yaml_matches_defaults():
    assert load_caps(str(REPO / "config" / "caps.yaml"), environ={}) == DEFAULT_CAPS


def test_parse_overrides():
    assert parse_overrides("{atlas_pairs: 5, lift_sweep_v: 3}") == {"atlas_pairs": 5, "lift_sweep_v": 3}
    assert parse_overrides("") == {}
    with pytest.raises(UsageError):
        parse_overrides("[1, 2]")
    with pytest.raises(UsageError):
        parse_overrides("{a: [")


def test_apply_overrides_rejects_bad_input():
    with pytest.raises(UsageError, match="unknown caps keys"):
        apply_overrides(Caps(), {"nope": 1})
    with pytest.raises(UsageError):
        apply_overrides(Caps(), {"atlas_pairs": -1})
    with pytest.raises(UsageError):
        apply_overrides(Caps(), {"atlas_pairs": "many"})


def test_resolution_order(tmp_path):
    path = tmp_path / "caps.yaml"
    path.write_text("caps:\n  atlas_pairs: 7\n  vertex_sweep_n: 5\n")
    caps = load_caps(str(path), override="{vertex_sweep_n: 4}", environ={CAPS_ENV: "{vertex_sweep_n: 3, lift_pairs: 9}"})
    assert caps.atlas_pairs == 7
    assert caps.lift_pairs == 9
    assert caps.vertex_sweep_n == 4


def test_missing_file(tmp_path):
    with pytest.raises(UsageError):
        load_caps(str(tmp_path / "absent.yaml"), environ={})
