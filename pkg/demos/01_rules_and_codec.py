"""
Rule tables and the 32-digit hex codec
======================================

A radius-3 binary CA reads a 7-cell neighborhood, so a rule is a lookup
table with 2**7 = 128 entries.  Rules travel as 32 hex digits: each digit
expands to 4 table bits, most significant bit first, and the concatenated
bit at position k is the output for neighborhood k (leftmost cell = most
significant bit of k).
"""

import numpy as np

from calab import benchmarks, parse_hex, random_rule
from calab.rng import substream

# decode a stored rule and poke at its table
das = benchmarks.BY_NAME["dens-b"]
rule = das.rule
print(f"rule {das.name}: {das.hex}")
print(f"table has {rule.outputs.size} entries, {int(rule.outputs.sum())} of them ON")

# neighborhood 0000000 (all OFF) and 1111111 (all ON): a rule that solves
# the density task must leave uniform states alone
print(f"output for all-OFF neighborhood: {rule.outputs[0]}")
print(f"output for all-ON  neighborhood: {rule.outputs[127]}")

# a few specific neighborhoods, shown as bit patterns
for k in (1, 8, 64, 100):
    bits = format(k, "07b")
    print(f"  neighborhood {bits} -> {rule.outputs[k]}")

# the codec round-trips exactly
assert rule.to_hex() == das.hex
print("hex -> table -> hex round-trip: exact")

# random rules for experiments come from a seeded generator
rng = substream(2024, 0)
fresh = random_rule(rng)
print(f"\na random rule: {fresh.to_hex()}")
print(f"its table density: {fresh.outputs.mean():.3f}")

# the stored catalog, with reference performance at 149 cells
print("\nstored rules (density / AND / OR at N=149):")
for b in benchmarks.BENCHMARKS:
    refs = [b.reference[(k, 149)] for k in ("density", "and", "or")]
    print(f"  {b.name:8s} {b.hex}  " + "  ".join(f"{r:.3f}" for r in refs))
