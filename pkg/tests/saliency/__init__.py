"""Tests for saliency maps, fixations and their file formats."""
