"""Unit tests for the slow-fast early-warning toolkit."""
