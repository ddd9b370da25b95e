"""Evaluation utilities.

Contains constants of the metrics and report formats.
"""

import numpy as np

# Regularizer of the KL ratio: float64 machine epsilon
KL_EPS = float(np.finfo(np.float64).eps)

REPORT_COLUMNS = ('method', 'person', 'image', 'kldiv', 'cc')
