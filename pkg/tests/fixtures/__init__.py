"""Shared fixtures: model parameters, normal-form coefficients and reference trajectories."""
