"""
smbs CLI - command-line interface to the inference and simulation commands
"""

from smbs.cli.main import cli

# Export cli as main for setuptools entry point
main = cli

__all__ = ["cli", "main"]
