"""atomkit test suite."""
