"""Per-frame feature families and the assembled feature vector."""

from .extract import (FeatureConfig, FeatureTable, FeatureVector, extract_batch, extract_features,
                      extract_matrix, read_feature_table, select_subset, write_feature_table)
from .hos import fourth_order_cross_cumulant, second_order_cumulant
from .ics import covariance_index, max_similarity_index
from .layout import (CHANNEL_PAIRS, FAMILIES, TABLE_SUBSETS, TD_NAMES, FeatureLayout, FeatureSubsetSpec,
                     build_layout, channel_pairs, parse_subset)
from .moments import log_moment_features
from .spectral import band_powers, burg_ar, burg_psd, psd_features
from .timedomain import TDConfig, time_domain_features

__all__ = [
    "CHANNEL_PAIRS", "FAMILIES", "TABLE_SUBSETS", "TD_NAMES", "FeatureConfig", "FeatureLayout",
    "FeatureSubsetSpec", "FeatureTable", "FeatureVector", "TDConfig", "band_powers", "build_layout",
    "burg_ar", "burg_psd", "channel_pairs", "covariance_index", "extract_batch", "extract_features",
    "extract_matrix", "fourth_order_cross_cumulant", "log_moment_features", "max_similarity_index",
    "parse_subset", "psd_features", "read_feature_table", "second_order_cumulant", "select_subset",
    "time_domain_features", "write_feature_table",
]
