# %% [markdown]
# Dimensionality reduction and ELM activations
#
# First, how accuracy falls as PCA keeps fewer components. Then the ELM
# shuffle-split protocol: with 200 hidden units and fewer training rows
# than that, the readout interpolates the training set, so training
# accuracy says little and the held-out column is the one to read.

# %%
import numpy as np

from semgact.evaluate import Dataset, cross_validate, elm_protocol, pca_accuracy_sweep
from semgact.features import FeatureConfig, FeatureTable, extract_matrix
from semgact.ingest import generate_synthetic_dataset
from semgact.preprocess import recording_frames

recs = generate_synthetic_dataset(seed=7)
frames = np.concatenate([recording_frames(r) for r in recs])
labels = [r.action.name for r in recs for _ in range(13)]
cfg = FeatureConfig()
values, _ = extract_matrix(frames)
ds = Dataset.from_table(FeatureTable(values, labels, [""] * len(labels), [0] * len(labels), cfg.layout(),
                                     ["Typing", "Rest", "Lifting", "Pushups"], cfg))

# %%
base = cross_validate(ds, "ICS + Freq", "svm", k=10, seed=9).metrics.accuracy
print(f"no PCA: {base:.3f}")
for k, acc in pca_accuracy_sweep(ds, "ICS + Freq", "svm", k_values=(2, 5, 10, 26, 50, "full"), seed=9):
    print(f"  k={k!s:>4}  accuracy {acc:.3f}  drop {base - acc:+.3f}")

# %%
print(f"{'activation':<10}{'train':>8}{'test':>8}")
for act in ("sig", "sin", "hardlim", "tribas", "radbas", "relu", "lrelu", "smax"):
    r = elm_protocol(ds, "ICS + Freq", act, n_tries=10, seed=4)
    print(f"{act:<10}{r.mean_train:>8.3f}{r.mean_test:>8.3f}")
