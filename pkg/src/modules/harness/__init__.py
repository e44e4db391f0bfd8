"""Batch experiments: built-in examples, gamma sweeps and the slope sweep."""
