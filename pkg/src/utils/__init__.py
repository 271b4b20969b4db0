"""Utility functions for parsing, validation and thread pools."""
