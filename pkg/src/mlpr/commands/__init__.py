"""
Directory containing the subcommands as namespace packages.
"""
