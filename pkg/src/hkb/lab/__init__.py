"""Desk-scale oracles, corpora and postulate checks."""
