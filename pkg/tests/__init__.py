"""Test suite for the slow-fast early-warning toolkit."""
