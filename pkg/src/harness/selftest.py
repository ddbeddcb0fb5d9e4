from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, List, Optional

import pandas as pd
from tqdm import tqdm

from src.config.caps import DEFAULT_CAPS, Caps
from src.flags.flags import complete_flag, mnat_completion
from src.functions.atlas import minimizer_atlas
from src.functions.mfunc import check_m_convex_fn, check_mnat_fn
from src.functions.quotients import (
    flag_constants,
    quotient_A,
    quotient_B,
    quotient_C,
    quotient_D,
    sparse_paving_quotient,
)
from src.generator.fixtures import load_fixture
from src.generator.random_instances import (
    child_seeds,
    gen_bipartite,
    gen_function_chain,
    gen_function_pair,
    gen_m_set,
    gen_non_quotient_pair,
    gen_quotient_pair,
    gen_sparse_paving_pair,
    gen_submodular,
    perturb_m_func,
    rng_for,
)
from src.harness.artifacts import CACHE_SCHEMA, ArtifactStore, stable_hash
from src.lattice.core import bounding_box
from src.lattice.errors import CapExceeded, Disagreement, EmptyResult, UsageError
from src.lift.lifts import lift_cardinality, matroid_lift, project_phi_set
from src.linking.bipartite import from_bipartite_subsets
from src.linking.linking_sets import induce, left_set, product, selector_linking_set
from src.msets.mconvex import check_m_convex, set_to_submodular, submodular_to_set
from src.msets.operations import (
    basic_minor,
    intersect_box,
    intersect_plank,
    minor_range,
    polymatroid_truncate,
    translate,
    truncate,
)
from src.quotient.characterizations import check_compliant, check_exchange, lifted_pair
from src.quotient.suite import Skipped, quotient_suite

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SelftestPlan:
    """Instance counts per stage; every count is drawn from `seed` through SeedSequence spawning."""
    seed: int = 42
    n: int = 3
    scale: int = 1
    quotient_pairs: int = 500
    non_quotient_pairs: int = 500
    correspondence: int = 1000
    formulas: int = 300
    inductions: int = 200
    lifts: int = 300
    function_pairs: int = 300
    wide_function_pairs: int = 200
    m_functions: int = 200
    chains: int = 200
    sparse_paving: int = 100

    def __post_init__(self):
        if self.n < 1 or self.scale < 0:
            raise UsageError(f"plan needs n >= 1 and scale >= 0, got n={self.n}, scale={self.scale}")
        negative = [k for k in STAGE_COUNTS if getattr(self, k) < 0]
        if negative:
            raise UsageError(f"stage counts must be nonnegative: {negative}")


STAGES = (
    "fixtures",
    "quotient_pairs",
    "non_quotient_pairs",
    "correspondence",
    "formulas",
    "inductions",
    "lifts",
    "function_pairs",
    "wide_function_pairs",
    "m_functions",
    "chains",
    "sparse_paving",
)

# plan fields that hold a stage's instance count
STAGE_COUNTS = STAGES[1:]


class Tally:
    def __init__(self):
        self.instances = 0
        self.agree = 0
        self.skipped: Dict[str, int] = {}
        self.failures: List[str] = []

    def record(self, label: str, ok: bool) -> None:
        self.instances += 1
        if ok:
            self.agree += 1
        else:
            self.failures.append(label)

    def skip(self, what: str) -> None:
        self.skipped[what] = self.skipped.get(what, 0) + 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "instances": self.instances,
            "agree": self.agree,
            "disagree": len(self.failures),
            "skipped": dict(sorted(self.skipped.items())),
            "failures": self.failures,
        }


# -----------------------------
# Stages
# -----------------------------

def _fixture_checks() -> Dict[str, Callable[[], bool]]:
    def running_pair():
        report = quotient_suite(load_fixture("running_P"), load_fixture("running_Q"), methods=range(1, 9))
        return all(v is True for v in report.verdicts.values())

    def tables():
        return (set_to_submodular(load_fixture("running_P")) == load_fixture("running_p")
                and set_to_submodular(load_fixture("running_Q")) == load_fixture("running_q"))

    def flag_completion():
        done = complete_flag(load_fixture("flag_chain"))
        names = ["flag_R", "flag_Q_prime", "flag_Q", "flag_P_prime", "flag_P"]
        if [S.points for S in done] != [load_fixture(k).points for k in names]:
            return False
        mnat = mnat_completion(done)
        return mnat[2].points == load_fixture("flag_Q_tilde").points

    def k32_induction():
        G = from_bipartite_subsets(load_fixture("k32_graph"))
        return len(G) == 54 and induce(load_fixture("k32_input"), G).points == load_fixture("k32_induced").points

    def layer_fill():
        c, _ = flag_constants(load_fixture("layer_fill_chain"))
        return c[2] == -2

    return {
        "running_pair": running_pair,
        "tables": tables,
        "flag_completion": flag_completion,
        "k32_induction": k32_induction,
        "layer_fill": layer_fill,
    }


def _stage_fixtures(plan: SelftestPlan, caps: Caps, progress: bool) -> Dict[str, Any]:
    tally = Tally()
    for name, check in tqdm(sorted(_fixture_checks().items()), desc="fixtures", disable=not progress, leave=False):
        tally.record(name, bool(check()))
    return tally.to_dict()


def _suite_stage(label: str, expected: bool, draw: Callable[[int], tuple]):
    def stage(plan: SelftestPlan, caps: Caps, progress: bool) -> Dict[str, Any]:
        tally = Tally()
        for s in tqdm(child_seeds(plan.seed + STAGES.index(label), getattr(plan, label)),
                      desc=label, disable=not progress, leave=False):
            p, q = draw(s, plan, caps)
            try:
                report = quotient_suite(submodular_to_set(p), submodular_to_set(q), caps)
            except Disagreement:
                tally.record(str(s), False)
                continue
            for method, v in report.verdicts.items():
                if isinstance(v, Skipped):
                    tally.skip(str(method))
            tally.record(str(s), report.verdict in (expected, None))
        return tally.to_dict()
    return stage


def _stage_correspondence(plan: SelftestPlan, caps: Caps, progress: bool) -> Dict[str, Any]:
    tally = Tally()
    for s in tqdm(child_seeds(plan.seed + STAGES.index("correspondence"), plan.correspondence),
                  desc="correspondence", disable=not progress, leave=False):
        p = gen_submodular(s, plan.n, plan.scale)
        P = submodular_to_set(p)
        tally.record(str(s), set_to_submodular(P).table == p.table and submodular_to_set(set_to_submodular(P)) == P)
    return tally.to_dict()


def _stage_formulas(plan: SelftestPlan, caps: Caps, progress: bool) -> Dict[str, Any]:
    """Minor, box and plank tables against point filtering."""
    tally = Tally()
    full = (1 << plan.n) - 1
    for s in tqdm(child_seeds(plan.seed + STAGES.index("formulas"), plan.formulas),
                  desc="formulas", disable=not progress, leave=False):
        P = gen_m_set(s, plan.n, plan.scale)
        rng = rng_for(s)
        try:
            for U in range(1, full):
                lo, hi = minor_range(P, U)
                for k in range(lo, hi + 1):
                    basic_minor(P, U, k, verify=True)
            a = [int(c) - 1 for c in rng.integers(-1, 2, size=plan.n)]
            b = [c + int(w) for c, w in zip(a, rng.integers(0, 3, size=plan.n))]
            try:
                intersect_box(P, a, b)
            except EmptyResult:
                tally.skip("empty_box")
            r = P.rank
            intersect_plank(P, r - 1, r + 1)
        except Disagreement:
            tally.record(str(s), False)
            continue
        tally.record(str(s), True)
    return tally.to_dict()


def _stage_inductions(plan: SelftestPlan, caps: Caps, progress: bool) -> Dict[str, Any]:
    """Induction keeps quotients and agrees with the product against the selector set."""
    tally = Tally()
    for s in tqdm(child_seeds(plan.seed + STAGES.index("inductions"), plan.inductions),
                  desc="inductions", disable=not progress, leave=False):
        a, b = child_seeds(s, 2)
        p, q = gen_quotient_pair(a, plan.n, plan.scale)
        P, Q = submodular_to_set(p), submodular_to_set(q)
        lo, _ = bounding_box(P.points + Q.points)
        shift = [-c for c in lo]
        P, Q = translate(P, shift), translate(Q, shift)
        G = from_bipartite_subsets(gen_bipartite(b, plan.n, plan.n))
        try:
            IP, IQ = induce(P, G), induce(Q, G)
        except EmptyResult:
            tally.skip("empty_induction")
            continue
        via_product = left_set(product(G, selector_linking_set(P)))
        tally.record(str(s), check_exchange(IP, IQ) and via_product.points == IP.points)
    return tally.to_dict()


def _stage_lifts(plan: SelftestPlan, caps: Caps, progress: bool) -> Dict[str, Any]:
    """Matroid lifts project back; compatible lifts agree with compliance; truncation lifts to truncation."""
    tally = Tally()
    for s in tqdm(child_seeds(plan.seed + STAGES.index("lifts"), plan.lifts),
                  desc="lifts", disable=not progress, leave=False):
        a, b = child_seeds(s, 2)
        try:
            if b % 2:
                p, q = gen_quotient_pair(a, plan.n, plan.scale)
            else:
                p, q = gen_non_quotient_pair(a, plan.n, plan.scale, caps)
            P, Q = submodular_to_set(p), submodular_to_set(q)
            M, cert = matroid_lift(P, caps)
            ok = project_phi_set(M.points, cert.phi, cert.v) == list(P.points) and len(M) == lift_cardinality(P)
            M, N, _ = lifted_pair(P, Q, caps)
            ok = ok and check_exchange(M, N) == check_compliant(p, q)
            k = P.rank - Q.rank
            if k >= 1:
                M, N, _ = lifted_pair(P, truncate(P, k), caps)
                ok = ok and N.points == polymatroid_truncate(M, k).points
        except CapExceeded as exc:
            tally.skip(exc.cap)
            continue
        tally.record(str(s), ok)
    return tally.to_dict()


def _function_pair_stage(label: str, gap: int):
    """gap 1: levels A-D agree; wider gaps: C implies D."""
    def stage(plan: SelftestPlan, caps: Caps, progress: bool) -> Dict[str, Any]:
        tally = Tally()
        for s in tqdm(child_seeds(plan.seed + STAGES.index(label), getattr(plan, label)),
                      desc=label, disable=not progress, leave=False):
            f, g = gen_function_pair(s, plan.n, plan.scale, gap=gap)
            try:
                if gap == 1:
                    verdicts = {quotient_A(f, g), quotient_B(f, g)[0], quotient_C(f, g), quotient_D(f, g, caps)}
                    ok = len(verdicts) == 1
                else:
                    ok = not quotient_C(f, g) or quotient_D(f, g, caps)
            except Disagreement as exc:
                logger.debug("function pair %d: %s", s, exc)
                tally.record(str(s), False)
                continue
            except CapExceeded as exc:
                tally.skip(exc.cap)
                continue
            tally.record(str(s), ok)
        return tally.to_dict()
    return stage


def _stage_m_functions(plan: SelftestPlan, caps: Caps, progress: bool) -> Dict[str, Any]:
    """A function passes the exchange inequality iff all its minimizer sets are M-convex."""
    tally = Tally()
    for s in tqdm(child_seeds(plan.seed + STAGES.index("m_functions"), plan.m_functions),
                  desc="m_functions", disable=not progress, leave=False):
        f = perturb_m_func(s, plan.n, plan.scale)
        try:
            cells_ok = all(check_m_convex(cell.fcell.points) for cell in minimizer_atlas(f, f, caps))
        except Disagreement:
            tally.record(str(s), False)
            continue
        except CapExceeded as exc:
            tally.skip(exc.cap)
            continue
        tally.record(str(s), check_m_convex_fn(f) == cells_ok)
    return tally.to_dict()


def _stage_chains(plan: SelftestPlan, caps: Caps, progress: bool) -> Dict[str, Any]:
    tally = Tally()
    for s in tqdm(child_seeds(plan.seed + STAGES.index("chains"), plan.chains),
                  desc="chains", disable=not progress, leave=False):
        chain = gen_function_chain(s, plan.n, plan.scale, length=3)
        try:
            _, h = flag_constants(chain)
        except Disagreement:
            tally.record(str(s), False)
            continue
        tally.record(str(s), check_mnat_fn(h))
    return tally.to_dict()


def _stage_sparse_paving(plan: SelftestPlan, caps: Caps, progress: bool) -> Dict[str, Any]:
    tally = Tally()
    for s in tqdm(child_seeds(plan.seed + STAGES.index("sparse_paving"), plan.sparse_paving),
                  desc="sparse_paving", disable=not progress, leave=False):
        f, g = gen_sparse_paving_pair(s, caps=caps)
        try:
            sparse_paving_quotient(f, g, caps)
        except Disagreement:
            tally.record(str(s), False)
            continue
        tally.record(str(s), True)
    return tally.to_dict()


STAGE_FUNCS = {
    "fixtures": _stage_fixtures,
    "quotient_pairs": _suite_stage(
        "quotient_pairs", True, lambda s, plan, caps: gen_quotient_pair(s, plan.n, plan.scale)),
    "non_quotient_pairs": _suite_stage(
        "non_quotient_pairs", False, lambda s, plan, caps: gen_non_quotient_pair(s, plan.n, plan.scale, caps)),
    "correspondence": _stage_correspondence,
    "formulas": _stage_formulas,
    "inductions": _stage_inductions,
    "lifts": _stage_lifts,
    "function_pairs": _function_pair_stage("function_pairs", 1),
    "wide_function_pairs": _function_pair_stage("wide_function_pairs", 2),
    "m_functions": _stage_m_functions,
    "chains": _stage_chains,
    "sparse_paving": _stage_sparse_paving,
}


# -----------------------------
# Runner
# -----------------------------

class SelftestRunner:
    """
    Runs the agreement stages in order, caching each stage's result by a
    stable hash of (stage, plan, caps). A store of None disables caching.
    """

    def __init__(self, store: Optional[ArtifactStore] = None, caps: Optional[Caps] = None):
        self.store = store
        self.caps = caps or DEFAULT_CAPS

    def _stage_key(self, stage: str, plan: SelftestPlan) -> str:
        return stable_hash({"schema": CACHE_SCHEMA, "stage": stage, "plan": asdict(plan), "caps": self.caps.to_dict()})

    def run(
        self,
        plan: SelftestPlan,
        recompute: Optional[set] = None,
        progress: bool = False,
    ) -> Dict[str, Any]:
        """
        recompute: optional set of stage names to force recompute, e.g.
          {"quotient_pairs", "chains"}
        """
        recompute = recompute or set()
        unknown = sorted(set(recompute) - set(STAGES))
        if unknown:
            raise ValueError(f"unknown stages in recompute: {unknown}")

        results: Dict[str, Any] = {}
        for stage in STAGES:
            key = self._stage_key(stage, plan)
            cached = None
            if self.store is not None and stage not in recompute:
                cached = self.store.load(stage, key)
            if cached is None:
                logger.info("stage %s: computing", stage)
                cached = STAGE_FUNCS[stage](plan, self.caps, progress)
                if self.store is not None:
                    self.store.save(stage, key, cached)
            else:
                logger.info("stage %s: cached", stage)
            results[stage] = cached

        summary = summarize(results)
        return {
            "schema": 1,
            "kind": "selftest",
            "plan": asdict(plan),
            "caps": self.caps.to_dict(),
            "stages": results,
            "summary": summary,
            "ok": all(row["disagree"] == 0 for row in summary),
            "digest": stable_hash(results),
        }


def summarize(results: Dict[str, Any]) -> List[Dict[str, Any]]:
    """One row per stage: instances, agree, disagree, skipped (total)."""
    frame = pd.DataFrame.from_dict(
        {
            stage: {
                "instances": r["instances"],
                "agree": r["agree"],
                "disagree": r["disagree"],
                "skipped": sum(r["skipped"].values()),
            }
            for stage, r in results.items()
        },
        orient="index",
    )
    frame.index.name = "stage"
    rows = frame.reset_index().to_dict(orient="records")
    return [{k: (v if k == "stage" else int(v)) for k, v in row.items()} for row in rows]
