"""Shared helpers for the demo scripts."""

from importlib import resources

DATA = resources.files("dcfkit") / "data"


def data_path(name: str) -> str:
    return str(DATA / name)
