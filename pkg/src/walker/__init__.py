"""Tier composition, the mapping graph, walks and closure."""
