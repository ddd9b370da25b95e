"""Tests for the synthetic data generators."""
