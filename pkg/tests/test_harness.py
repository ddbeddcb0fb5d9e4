import pytest

from src.config.caps import Caps
from src.harness import selftest
from src.harness.artifacts import CACHE_SCHEMA, ArtifactStore, canonical_json, stable_hash
from src.harness.selftest import STAGE_COUNTS, STAGES, SelftestPlan, SelftestRunner, summarize
from src.lattice.errors import CapExceeded, Disagreement, UsageError

PLAN = SelftestPlan(seed=7, n=2, scale=1, quotient_pairs=3, non_quotient_pairs=3, correspondence=4,
                    formulas=2, inductions=3, lifts=3, function_pairs=2, wide_function_pairs=2,
                    m_functions=3, chains=2, sparse_paving=1)
CAPS = Caps(vertex_sweep_n=4, lift_sweep_v=6, lift_membership_v=8, atlas_pairs=400,
            lift_pairs=5000, rejection_draws=500)


def test_stable_hash_ignores_key_order():
    assert stable_hash({"a": 1, "b": [1, 2]}) == stable_hash({"b": [1, 2], "a": 1})
    assert canonical_json({"b": 1, "a": 2}) == '{"a":2,"b":1}'


def test_artifact_store_round_trip(tmp_path):
    store = ArtifactStore(str(tmp_path / "cache"))
    assert store.load("stage", "k") is None
    store.save("stage", "k", {"instances": 1})
    assert store.load("stage", "k") == {"instances": 1}
    assert (tmp_path / "cache" / "stage__k.json").exists()


def test_artifact_store_ignores_other_schema(tmp_path):
    old = ArtifactStore(str(tmp_path), schema=CACHE_SCHEMA - 1)
    old.save("stage", "k", {"instances": 1})
    store = ArtifactStore(str(tmp_path))
    assert store.load("stage", "k") is None
    store.save("stage", "k", {"instances": 2})
    assert store.load("stage", "k") == {"instances": 2}
    assert old.load("stage", "k") is None


def test_small_plan_agrees():
    result = SelftestRunner(caps=CAPS).run(PLAN)
    assert result["ok"], result["summary"]
    assert [row["stage"] for row in result["summary"]] == list(STAGES)
    assert result["stages"]["fixtures"]["disagree"] == 0
    assert result["stages"]["quotient_pairs"]["instances"] == 3


def test_digest_is_deterministic():
    a = SelftestRunner(caps=CAPS).run(PLAN)
    b = SelftestRunner(caps=CAPS).run(PLAN)
    assert a["digest"] == b["digest"]


def test_cache_reuse_and_recompute(tmp_path, monkeypatch):
    calls = []
    real = selftest.STAGE_FUNCS["chains"]

    def counted(plan, caps, progress):
        calls.append(plan.seed)
        return real(plan, caps, progress)

    monkeypatch.setitem(selftest.STAGE_FUNCS, "chains", counted)
    runner = SelftestRunner(ArtifactStore(str(tmp_path)), CAPS)
    first = runner.run(PLAN)
    second = runner.run(PLAN)
    assert len(calls) == 1
    assert first["digest"] == second["digest"]
    runner.run(PLAN, recompute={"chains"})
    assert len(calls) == 2
    with pytest.raises(ValueError, match="unknown stages"):
        runner.run(PLAN, recompute={"warp"})


def test_summarize_counts_skips():
    rows = summarize({
        "a": {"instances": 2, "agree": 2, "disagree": 0, "skipped": {"9": 2, "10": 1}, "failures": []},
    })
    assert rows == [{"stage": "a", "instances": 2, "agree": 2, "disagree": 0, "skipped": 3}]


def test_default_plan_sizes():
    plan = SelftestPlan()
    assert plan.quotient_pairs >= 500 and plan.non_quotient_pairs >= 500
    assert plan.correspondence >= 1000
    assert plan.formulas >= 300
    assert all(getattr(plan, k) > 0 for k in STAGE_COUNTS)


@pytest.mark.parametrize("override", [{"n": 0}, {"scale": -1}, {"lifts": -1}])
def test_plan_rejects_bad_sizes(override):
    with pytest.raises(UsageError):
        SelftestPlan(**override)


def test_cache_key_tracks_schema(monkeypatch):
    runner = SelftestRunner(caps=CAPS)
    key = runner._stage_key("chains", PLAN)
    monkeypatch.setattr(selftest, "CACHE_SCHEMA", CACHE_SCHEMA + 1)
    assert runner._stage_key("chains", PLAN) != key


def _raise(exc):
    def boom(*args, **kwargs):
        raise exc
    return boom


@pytest.mark.parametrize("stage", ["function_pairs", "wide_function_pairs"])
def test_function_stage_counts_disagreement(monkeypatch, stage):
    monkeypatch.setattr(selftest, "quotient_C", lambda f, g: True)
    monkeypatch.setattr(selftest, "quotient_D", _raise(Disagreement("level D mismatch")))
    plan = SelftestPlan(seed=1, n=2, **{stage: 3})
    out = selftest.STAGE_FUNCS[stage](plan, CAPS, False)
    assert out["instances"] == 3
    assert out["disagree"] == 3
    assert out["skipped"] == {}


def test_function_stage_skips_on_caps(monkeypatch):
    monkeypatch.setattr(selftest, "quotient_D", _raise(CapExceeded("atlas_pairs", 900, 400)))
    out = selftest.STAGE_FUNCS["function_pairs"](SelftestPlan(seed=1, n=2, function_pairs=3), CAPS, False)
    assert out["instances"] == 0
    assert out["skipped"] == {"atlas_pairs": 3}


def test_m_function_stage_counts_disagreement(monkeypatch):
    monkeypatch.setattr(selftest, "minimizer_atlas", _raise(Disagreement("face not exposed")))
    out = selftest.STAGE_FUNCS["m_functions"](SelftestPlan(seed=2, n=2, m_functions=2), CAPS, False)
    assert out["disagree"] == 2
