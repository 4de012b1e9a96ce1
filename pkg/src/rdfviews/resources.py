"""Access to the files bundled under ``rdfviews/data``."""

from __future__ import annotations

from importlib import resources


def data_file(*parts: str):
    return resources.files("rdfviews").joinpath("data", *parts)


def read_data(*parts: str) -> str:
    return data_file(*parts).read_text(encoding="utf-8")


def list_data(directory: str, suffix: str = "") -> list:
    """Sorted names of bundled files in ``directory`` ending with ``suffix``."""
    return sorted(p.name for p in data_file(directory).iterdir() if p.name.endswith(suffix))


__all__ = ["data_file", "read_data", "list_data"]
