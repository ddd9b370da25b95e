"""Tests for metrics and evaluation reports."""
