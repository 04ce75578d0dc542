"""Method comparison harness: ROC curves, random forest, report assembly."""

from stratembed.evaluation.compare import ComparisonReport, compare_methods
from stratembed.evaluation.forest import ForestModel, forest_predict, forest_train
from stratembed.evaluation.roc import RocCurve, roc_auc

__all__ = [
    "ComparisonReport",
    "ForestModel",
    "RocCurve",
    "compare_methods",
    "forest_predict",
    "forest_train",
    "roc_auc",
]
