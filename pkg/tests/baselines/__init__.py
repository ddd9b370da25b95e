"""Tests for the averaging baselines."""
