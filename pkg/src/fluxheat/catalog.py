"""The shipped case catalog: one config per explicit-solution result.

The acceptance suite is a walk over these files; the CLI accepts any of them
directly.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

__all__ = ["catalog_dir", "case_ids", "load_case", "iter_cases"]


def catalog_dir() -> Path:
    return Path(resources.files("fluxheat") / "catalog")


def case_ids() -> list[str]:
    return sorted(p.stem for p in catalog_dir().glob("*.json"))


def load_case(case_id: str) -> dict:
    path = catalog_dir() / f"{case_id}.json"
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def iter_cases():
    for cid in case_ids():
        yield cid, load_case(cid)
