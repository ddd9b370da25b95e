"""Tests for the CP regression, model files and sweeps."""
