"""Command-line front end, config files and output writers."""
