"""Shared helpers and schemas."""
