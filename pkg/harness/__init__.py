"""
Experiment harness: configuration, simulation rig, runners and CLI.

Usage:
    from harness.config import load_config
    from harness.runner import run_closed_loop

    result = run_closed_loop(load_config("config/default.toml"))
"""
