"""Package tests."""
