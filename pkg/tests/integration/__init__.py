"""Integration tests across the simulation pipeline and the CLI."""
