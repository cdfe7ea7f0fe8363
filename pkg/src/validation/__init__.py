"""Rule engine and report rendering for mapping sets."""
