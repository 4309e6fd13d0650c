"""Scripts package for pipeline utilities."""
