"""Automobile accident counts per policy (9,461 policies) and three tail modifications.

``O`` is the original table.  ``M1``, ``M2`` and ``M3`` move 140 policies
from 0 accidents to 2 accidents (M1), spread over 2-7 accidents (M2), or
to 7 accidents (M3).
"""
from __future__ import annotations

from importlib import resources

from .empirical import DiscreteSample

DATASETS = ("O", "M1", "M2", "M3")


def dataset_text(name: str) -> str:
    key = name.upper()
    if key not in DATASETS:
        raise KeyError(f"unknown dataset {name!r}; choose from {DATASETS}")
    return resources.files("discrisk.data").joinpath(f"{key}.csv").read_text(encoding="utf-8")


def load_dataset(name: str) -> DiscreteSample:
    return DiscreteSample.from_text(dataset_text(name))
