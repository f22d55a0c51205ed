"""Unit tests for the feeder co-simulation toolkit."""
