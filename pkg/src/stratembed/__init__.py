"""Patient stratification via deep embedded clustering.

Pipeline: cohort preprocessing -> phased encoder training (DEC or DSEC) ->
hierarchical subgroup discovery on the 3-d embedding -> diagnosis-code
enrichment -> ROC/AUC comparison of PCA, DEC and DSEC.
"""

from stratembed.backends import BACKEND_NAME

__version__ = "0.1.0"

__all__ = ["BACKEND_NAME", "__version__"]
