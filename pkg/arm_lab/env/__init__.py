"""Synthetic reasoning environment and its exact expected-reward oracle."""
