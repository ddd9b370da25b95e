"""Tests for dense and CP tensor algebra."""
