"""Solver services for GPMColor."""
