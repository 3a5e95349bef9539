# %% [markdown]
# The 303-value feature vector
#
# Every envelope frame maps to five feature families: inter-channel
# statistics, Burg band powers, log spectral moments, time-domain
# descriptors of the channel-mean envelope, and cumulants.

# %%
import numpy as np

from semgact.features import FAMILIES, TD_NAMES, extract_features, select_subset
from semgact.ingest import generate_synthetic_dataset
from semgact.preprocess import preprocess_recording

rec = generate_synthetic_dataset(seed=7)[0]
frame = preprocess_recording(rec)[3]
v = extract_features(frame)
print("length", v.values.size, "provenance", v.provenance)
for fam in FAMILIES:
    block = v.family(fam)
    print(f"  {fam:<5} {block.size:>4} values, range [{block.min():.3g}, {block.max():.3g}]")

# %% [markdown]
# Time-domain descriptors by name.

# %%
for name, val in zip(TD_NAMES, v.family("TDS")):
    print(f"  {name:<6} {val: .5g}")

# %% [markdown]
# Subsets select whole families by name, using the same vocabulary as
# the evaluation grid.

# %%
for spec in ("All", "ICS + Freq", "Time + ICS + HOSA", "HOSA"):
    print(f"  {spec:<18} -> {select_subset(v, spec).size} features")

# %% [markdown]
# Identical channels are perfectly similar at lag zero, so every
# max-similarity entry becomes 1.

# %%
same = np.tile(frame.data[0], (8, 1))
print("max-similarity block:", np.unique(extract_features(same).family("ICS")[:28].round(12)))
