from .commands import (
    ScanResult,
    TableEntry,
    cmd_evolve,
    cmd_scan_alpha,
    cmd_scan_beta,
    cmd_steady,
    run_trajectory,
    table1,
)
from .config import InitialState, RunConfig, build_config, parse_config

__all__ = [
    "InitialState",
    "RunConfig",
    "ScanResult",
    "TableEntry",
    "build_config",
    "cmd_evolve",
    "cmd_scan_alpha",
    "cmd_scan_beta",
    "cmd_steady",
    "parse_config",
    "run_trajectory",
    "table1",
]
