"""Core modules: exact integer algebra, conjugacy, classification and search."""
