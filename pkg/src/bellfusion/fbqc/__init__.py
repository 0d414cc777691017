"""Fusion-network simulation: encoded fusions, decoding graphs, thresholds."""
