"""Run the executable checks over a truncated group and replay a witness."""

from coxhecke import CoxeterMatrix, MissingPrerequisite, Workspace, run_suite
from coxhecke.verify import replay, suite_ids

ws = Workspace(CoxeterMatrix.triangle(3, 3, 4), 9, margin=4)
for sid in suite_ids():
    try:
        print(run_suite(sid, ws, deterministic=True).summary_line())
    except MissingPrerequisite as exc:
        print(f"N/A  {sid}: {exc}")

# a deliberately false claim: mu(e, s.t.s) is 0, not 1
witness = {"case": "mu_equals_one", "args": ["e", "s.t.s"]}
print("replayed witness detail:", replay(ws, witness))
