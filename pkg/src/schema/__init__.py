"""Core data model: CURIEs, prefix maps, mappings, mapping sets and diagnostics."""
