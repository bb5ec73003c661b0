"""Exact engine for quantum field theory on stable graphs."""
