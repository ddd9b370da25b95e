"""Tests for manifests, run configs, experiment phases and the CLI."""
