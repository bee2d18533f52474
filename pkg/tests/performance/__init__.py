"""Performance tests for the simulation pipeline."""
