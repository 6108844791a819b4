"""Three pairwise crossing disks: faces, ply, local radius, and the layering."""
from subfree.disks import (
    blow_up, build_arrangement, disk_layering, make_disks, minor_model, raw_levels, stats_json,
)

ds = make_disks([(0, 0, 1), (1, 0, 1), ("0.5", "0.8", 1)])
arr = build_arrangement(ds)
print(stats_json(arr), "euler ok:", arr.euler_ok())
for i, f in enumerate(arr.faces):
    tag = "outer" if i == arr.outer else f"inside {list(f.depth)}"
    print(f"face {i}: {tag}")

host, cliques = blow_up(arr)
model = minor_model(ds, arr, (host, cliques))
print(f"blow-up has {host.n} vertices; branch sets {model.branch_sets}, depth {model.depth}")
print("raw levels", raw_levels(arr), "-> layers", disk_layering(ds, arr).layer_of)
