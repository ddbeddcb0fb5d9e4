"""
Quotient Playground (worked examples + one generated pair)

This script is meant to be executed as a reference.
You can copy/paste the sections into notebook cells if you prefer.

Order enforced:
  1) Load the worked-example sets and tables
  2) Run every characterization of P ↠ Q
  3) Complete the shipped flag, then embed it in an M♮-convex flag
  4) Shift a chain of functions by its flag constants
  5) Run the agreement harness (cached under ARTIFACT_DIR)
  6) Tabulate the harness summary
"""

import os

import pandas as pd

from src.config.caps import load_caps
from src.flags.flags import complete_flag, is_mnat_flag, mnat_completion
from src.functions.quotients import flag_constants, quotient_A, quotient_C, quotient_D
from src.generator.fixtures import load_fixture
from src.generator.random_instances import gen_function_pair
from src.harness.artifacts import ArtifactStore
from src.harness.selftest import SelftestPlan, SelftestRunner
from src.quotient.suite import quotient_suite, verdict_label


def main():
    # -----------------------------
    # USER INPUTS (edit these)
    # -----------------------------
    ARTIFACT_DIR = os.environ.get("ARTIFACT_DIR", "./artifacts")
    CAPS_FILE = os.environ.get("CAPS_FILE", "config/caps.yaml")
    SEED = int(os.environ.get("SEED", "42"))

    caps = load_caps(CAPS_FILE if os.path.exists(CAPS_FILE) else None)

    # -----------------------------
    # 1) Worked examples
    # -----------------------------
    P = load_fixture("running_P")
    Q = load_fixture("running_Q")
    print(f"P: rank {P.rank}, {len(P)} points | Q: rank {Q.rank}, {len(Q)} points")

    # -----------------------------
    # 2) Characterizations
    # -----------------------------
    report = quotient_suite(P, Q, caps)
    for method, v in sorted(report.verdicts.items()):
        print(f"  ({method}) {verdict_label(v)}")
    print("verdict:", report.verdict)

    # -----------------------------
    # 3) Flags
    # -----------------------------
    chain = list(load_fixture("flag_chain"))
    full = complete_flag(chain)
    print("completed ranks:", [S.rank for S in full], "| M♮ flag:", is_mnat_flag(full))
    canonical = mnat_completion(full)
    print("canonical layers:", [len(S) for S in canonical], "| M♮ flag:", is_mnat_flag(canonical))

    # -----------------------------
    # 4) Functions
    # -----------------------------
    c, h = flag_constants(load_fixture("layer_fill_chain"))
    print("flag constants:", [str(x) for x in c], "| h on", len(h), "points")

    f, g = gen_function_pair(SEED, 2)
    print("generated pair: A =", quotient_A(f, g), "C =", quotient_C(f, g), "D =", quotient_D(f, g, caps))

    # -----------------------------
    # 5) Harness
    # -----------------------------
    store = ArtifactStore(ARTIFACT_DIR)
    runner = SelftestRunner(store, caps)
    result = runner.run(SelftestPlan(seed=SEED), progress=True)

    # -----------------------------
    # 6) Summary
    # -----------------------------
    print(pd.DataFrame(result["summary"]).set_index("stage"))
    print("ok:", result["ok"], "| digest:", result["digest"])


if __name__ == "__main__":
    main()
