"""Command handlers for the oovkit CLI."""
