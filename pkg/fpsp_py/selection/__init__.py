"""Adaptive image selection module.

Scores images by how much training persons disagree on their objects
and picks the common images a target person is asked to view.
"""
