"""Saliency map module.

Map types, ground-truth construction from fixations, the USM and
difference-map algebra, resampling and the on-disk map formats.
"""
