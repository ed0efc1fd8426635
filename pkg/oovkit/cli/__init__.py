"""oovkit CLI module."""
