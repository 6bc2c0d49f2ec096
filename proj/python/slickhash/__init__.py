"""Sliding-block hash table with a bounded-offset main table and a backyard."""

from ._core import (
    BenchError,
    BenchRecord,
    CleaningPolicy,
    ConfigError,
    InsertKind,
    SlickConfig,
    SlickTable,
    check_invariants,
    gen_keys,
    grid_configs,
    hash_key,
    mix64,
    run_grid,
    write_csv,
)

__all__ = [
    "BenchError",
    "BenchRecord",
    "CleaningPolicy",
    "ConfigError",
    "InsertKind",
    "SlickConfig",
    "SlickTable",
    "check_invariants",
    "gen_keys",
    "grid_configs",
    "hash_key",
    "mix64",
    "run_grid",
    "write_csv",
]
