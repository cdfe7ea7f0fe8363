"""Preprocessing and lexical matching of term tables."""
