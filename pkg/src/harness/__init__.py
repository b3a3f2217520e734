"""
harness

Monte Carlo experiment runner: replication pool, seed derivation, result
tables, CSV/JSON emitters and the command-line interface.
"""
