"""
Sweeping the bundled corpus
===========================

Runs every check on a handful of entries and tallies the outcomes.
The full run is ``hallorbits corpus run``; this is the library route.
"""

from collections import Counter

from hallorbits import RunConfig, load_corpus, run_all

# %%
corpus = load_corpus()
print(len(corpus), "entries, for example:")
for e in corpus[:5]:
    print(f"  {e.name:12s} {e.kind:4s} {e.description}")

# %%
# Lenient mode admits modules whose characteristic lies outside pi.
cfg = RunConfig(mode="lenient", entries=("GL23", "S4", "Gamma8", "SL24+C7"), seed=0)
result = run_all(cfg, write=False)
print(Counter((r.check, r.status) for r in result.records))

# %%
# The main inequality, side by side.
for r in result.records:
    if r.check == "main-inequality" and "lhs" in r.details:
        print(f"{r.entry:8s} pi={{{r.pi}}}  {r.details['lhs']:>3} <= {r.details['rhs']}")

print("exit code", result.exit_code)
