"""Tensor-to-matrix regression module.

Fits a CP-rank-constrained weight tensor that maps the stacked PSMs of
training persons to the PSM of one target person, by alternating ridge
least squares, and applies it to new images.
"""
