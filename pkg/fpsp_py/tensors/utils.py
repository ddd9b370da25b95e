"""Tensor utilities.

Contains constants shared by the dense and CP modules.
"""

# Largest number of entries cp_reconstruct will materialize
RECONSTRUCT_SIZE_CAP = 10 ** 7
