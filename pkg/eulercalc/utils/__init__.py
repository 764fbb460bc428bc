"""
Configuration, output and seeded fixture helpers.
"""
