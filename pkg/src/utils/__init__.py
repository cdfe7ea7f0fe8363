"""Utility modules for the SSSOM toolkit"""
