"""CLI interface for the exact structures lab."""
