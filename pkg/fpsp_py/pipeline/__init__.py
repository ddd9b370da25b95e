"""Pipeline module.

Dataset ingestion, the experiment phases and the `fpsp` command line.
"""
