"""SSSOM toolkit: read, validate, transform, walk and generate mapping sets."""

__version__ = "0.1.0"
