"""Interchange and report helpers for GPMColor."""
