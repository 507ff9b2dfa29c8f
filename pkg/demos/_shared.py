from __future__ import annotations

from pathlib import Path

import pplan

DATA = Path(pplan.__file__).resolve().parent / "data"


def domain(name: str) -> Path:
    return DATA / "domains" / f"{name}.dom"


def prefs(name: str) -> Path:
    return DATA / "prefs" / f"{name}.pref"


def banner(title: str) -> None:
    print(f"\n== {title} " + "=" * max(0, 60 - len(title)))
