"""Walk through the window framework on an instance built to trigger it.

A single pattern K3 + K2 is forbidden. Copies of K2 are scattered over many
odd windows, so the family is reduced to K3 before the tree-decomposition
solver ever runs; windows without copies lose their middle layers.
"""
import random

from subfree.generators import reduction_trigger_instance
from subfree.graph import complete_graph, path_graph
from subfree.layering import prune_middle_layers, reduce_family, solve, window_plan
from subfree.oracle import oracle_solve

rng = random.Random(1)
k = 1
g, lay, fam = reduction_trigger_instance(rng, k, path_graph(2), complete_graph(3))
print(f"host: {g.n} vertices, {g.m} edges, {lay.num_layers} layers; r = {fam.r}, k = {k}")

plan = window_plan(lay, fam.r)
print(f"{len(plan.windows)} windows of {3 * fam.r} layers; odd ones start at",
      [plan.windows[p][0] for p in plan.odd()])

trace = []
reduced = reduce_family(g, plan, fam, k, trace)
for pattern, removed in trace:
    print(f"pattern {pattern}: component on pattern vertices {list(removed)} dropped")
print("reduced family orders:", [p.n for p in reduced])

sub, back = prune_middle_layers(g, lay, plan, reduced)
print(f"pruning keeps {sub.n} of {g.n} vertices")

out = solve(g, lay, fam, k)
print("framework:", out.to_json())
print("oracle:   ", oracle_solve(g, fam, k).to_json())
