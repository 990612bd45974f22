"""Spreading image encoding work over GPUs."""

import random

from vlplan.balance import WorkItem, group_balance, image_cost, lpt_assign

rng = random.Random(0)
n_gpus = 8

# Each GPU starts with the images its data loader produced.
items = []
for gpu in range(n_gpus):
    for k in range(rng.randint(1, 6)):
        n_patches = rng.choice([64, 256, 1024, 4096])
        items.append(WorkItem(f"g{gpu}-{k}", image_cost(n_patches, 1.0, 1e-3), gpu))

before = [0.0] * n_gpus
for it in items:
    before[it.origin_worker] += it.cost
print("loads before balancing:", [round(v) for v in before], "max", round(max(before)))

everywhere = lpt_assign(items, n_gpus)
print("global LPT:            ", [round(v) for v in everywhere.loads], "max", round(everywhere.makespan))

grouped = group_balance(items, n_gpus, group_size=4)
print("LPT within 2 groups:   ", [round(v) for v in grouped.loads], "max", round(grouped.makespan))
