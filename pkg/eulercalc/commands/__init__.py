"""
Subcommand implementations; each module exposes run_<name>(config) and runs standalone.
"""
