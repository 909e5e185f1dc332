"""Bundled example data."""

from __future__ import annotations

import json
from importlib import resources

from .table import VanishingTable


def g22_example() -> VanishingTable:
    """The running g = 22, r = 6, d = 25 table with a single swap in column 9."""
    payload = resources.files("llschain").joinpath("data/g22_example.json")
    return VanishingTable.from_json(json.loads(payload.read_text()))
