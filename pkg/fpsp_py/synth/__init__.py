"""Synthetic data module.

Seeded generators for persons with latent gaze tendencies, planted
regression instances and fixations, written in the same formats the
pipeline ingests.
"""
