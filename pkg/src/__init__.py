"""Synaptic event simulator package root."""
