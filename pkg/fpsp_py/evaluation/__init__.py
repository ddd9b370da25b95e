"""Evaluation module.

Distribution-level (KLdiv) and pixel-level (CC) comparison of predicted
maps with ground truth, aggregated per method.
"""
