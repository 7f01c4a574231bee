"""Numerical checks for glued Dirac operators on the quantum and classical sphere."""

from ._qdirac import *  # noqa: F401,F403
from ._qdirac import QdiracError, run_command

__all__ = [name for name in dir() if not name.startswith("_")]


def run(command: str, config_text: str = "") -> tuple[bool, str, dict[str, str]]:
    """Run a CLI verb in-process on a YAML config string; returns (pass, summary, documents)."""
    from ._qdirac import ExperimentConfig

    config = ExperimentConfig.parse(config_text) if config_text else ExperimentConfig()
    return run_command(command, config)
