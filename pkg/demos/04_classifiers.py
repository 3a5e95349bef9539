# %% [markdown]
# Three classifiers on one feature matrix
#
# k-NN, an SMO-trained RBF SVM and an extreme learning machine, all
# behind the same train/predict calls. The feature pipeline (column
# selection, z-score) is fitted on training rows only.

# %%
import numpy as np

from semgact.classify import parse_classifier, predict, train
from semgact.evaluate import Dataset, stratified_shuffle_split
from semgact.features import FeatureConfig, FeatureTable, extract_matrix
from semgact.ingest import generate_synthetic_dataset
from semgact.pipeline import FeaturePipeline
from semgact.preprocess import recording_frames

recs = generate_synthetic_dataset(seed=7)
frames = np.concatenate([recording_frames(r) for r in recs])
labels = [r.action.name for r in recs for _ in range(13)]
values, _ = extract_matrix(frames)
cfg = FeatureConfig()
table = FeatureTable(values, labels, [""] * len(labels), [0] * len(labels), cfg.layout(),
                     ["Typing", "Rest", "Lifting", "Pushups"], cfg)
ds = Dataset.from_table(table)
X = ds.columns("ICS + Freq")
print("feature matrix", X.shape)

# %%
tr, te = stratified_shuffle_split(ds.y, 0.7, seed=1)
pipe = FeaturePipeline().fit(X[tr])
Xtr, Xte = pipe.transform(X[tr]), pipe.transform(X[te])
for name in ("1-NN", "5-NN", "svm", "svm:C=10", "elm:sig", "elm:relu"):
    model = train(parse_classifier(name), Xtr, ds.y[tr], ds.n_classes, seed=3)
    acc = np.mean(predict(model, Xte) == ds.y[te])
    print(f"  {name:<10} held-out accuracy {acc:.3f}")

# %% [markdown]
# The SVM keeps one binary machine per class pair. Support-vector counts
# show how much of the training set each boundary needs.

# %%
svm = train(parse_classifier("svm"), Xtr, ds.y[tr], ds.n_classes)
for m in svm.machines:
    print(f"  {ds.label_set[m.pos]:>8} vs {ds.label_set[m.neg]:<8} SVs={len(m.dual_coef):3d} "
          f"KKT gap={m.kkt_gap:.1e}")
