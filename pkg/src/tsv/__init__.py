"""SSSOM TSV reading and canonical writing."""
