"""
Test suite for atomspec.
"""
