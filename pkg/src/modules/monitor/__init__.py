"""Discrete-time monitoring: predicted trigger times with invalidation on every firing."""
