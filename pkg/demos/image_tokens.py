"""How many vision tokens does an image cost, and how do images share a sequence?"""

import numpy as np

from vlplan.imgproc import image_grid, rope_angles, rope_positions, sample_mim_mask
from vlplan.packer import PackItem, build_attention_mask, pack_images

# A few photos at their native sizes.
photos = {"receipt": (1080, 2400), "thumbnail": (100, 50), "screenshot": (1920, 1080), "icon": (10, 12)}

for name, (w, h) in photos.items():
    g = image_grid(w, h)
    print(f"{name:>10}: {w}x{h} -> {g.snapped_width}x{g.snapped_height}, "
          f"{g.rows}x{g.cols} patches = {g.n_patches}, {g.n_pooled} tokens after 2x2 pooling")

# Every patch gets a (row, col) position; RoPE turns that into rotation angles.
g = image_grid(100, 50)
pos = rope_positions(g)
print("\nfirst positions:", pos[:5])
print("angles for", pos[9], "->", np.round(rope_angles(pos[9], head_dim=8), 4))

# Masked image modeling hides 75% of the patches.
mask = sample_mim_mask(g.n_patches, 0.75, seed=0)
print(f"\nMIM mask hides {mask.n_masked} of {g.n_patches} patches")

# Pack the patch sequences of several images into 16384-token sequences.
items = [PackItem(name, image_grid(*dims).n_patches) for name, dims in photos.items()]
plan = pack_images(items, max_seq_len=16384)
for i, b in enumerate(plan.bins):
    print(f"\nsequence {i}: {[it.item_id for it in b]} ({sum(it.token_count for it in b)} tokens)")

small = [PackItem("a", 2), PackItem("b", 3)]
print("\nattention mask for two images of 2 and 3 patches:")
print(build_attention_mask(small).astype(int))
