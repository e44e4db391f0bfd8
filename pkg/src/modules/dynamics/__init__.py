"""Hybrid-state evolution, trigger quantities and the Lyapunov function."""
