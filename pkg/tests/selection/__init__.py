"""Tests for variance scores and common image selection."""
