# %% [markdown]
# Cross-validated metrics by feature subset
#
# Ten-fold stratified CV with the pipeline re-fitted inside every fold.
# Metrics come from the confusion matrix pooled across folds.

# %%
import numpy as np

from semgact.evaluate import ConfusionMatrix, Dataset, compute_metrics, cross_validate
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
print(f"{'subset':<18}{'1-NN':>8}{'SVM':>8}")
for subset in ("All", "Time Based", "ICS", "PSD", "LMF", "HOSA", "ICS + Freq"):
    accs = [cross_validate(ds, subset, clf, k=10, seed=42).metrics.accuracy for clf in ("1-NN", "svm")]
    print(f"{subset:<18}{accs[0]:>8.3f}{accs[1]:>8.3f}")

# %% [markdown]
# Per-class rates for one cell of the grid.

# %%
res = cross_validate(ds, "HOSA", "1-NN", k=10, seed=42)
m = res.metrics
print(res.confusion.counts)
for i, lb in enumerate(m.labels):
    print(f"  {lb:<8} sens={m.sensitivity[i]:.3f} spec={m.specificity[i]:.3f} "
          f"prec={m.precision[i]:.3f} F={m.f_measure[i]:.3f}")
print("kappa %.3f  balanced accuracy %.3f" % (m.cohens_kappa, m.balanced_accuracy))

# %% [markdown]
# Kappa discounts chance agreement. A hand-made binary matrix:

# %%
cm = ConfusionMatrix(np.array([[45, 5], [10, 40]]))
print("kappa of [[45,5],[10,40]] =", round(compute_metrics(cm).cohens_kappa, 12))
