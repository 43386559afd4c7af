"""Scenario files: JSON descriptions of an arrangement and a degree bound."""
from __future__ import annotations

import hashlib
import json
import keyword
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import poly as P
from .cech import Arrangement, ArrangementError, Divisor, StratumSpec
from .ssimplicial import StratumCorrespondence

KEYS = {"variables", "divisors", "strata_mode", "strata", "d_max"}


class ScenarioError(ValueError):
    """Unusable input; ``location`` says where in the file."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


@dataclass(frozen=True)
class Scenario:
    arrangement: Arrangement
    d_max: int
    digest: str
    source: str


def digest_bytes(*blobs: bytes) -> str:
    h = hashlib.sha256()
    for b in blobs:
        h.update(hashlib.sha256(b).digest())
    return h.hexdigest()


def _read(path: str | Path) -> tuple[bytes, dict]:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ScenarioError(str(path), f"cannot read file ({exc.strerror})") from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    if not isinstance(data, dict):
        raise ScenarioError(str(path), "top level must be a JSON object")
    return raw, data


def _usable_name(v) -> bool:
    return isinstance(v, str) and v.isidentifier() and not keyword.iskeyword(v)


def parse_scenario(data: dict, where: str = "<scenario>") -> tuple[Arrangement, int]:
    unknown = sorted(set(data) - KEYS)
    if unknown:
        raise ScenarioError(where, f"unknown keys {unknown}")
    variables = data.get("variables")
    if not isinstance(variables, list) or not all(_usable_name(v) for v in variables):
        raise ScenarioError(f"{where}: variables", "expected a list of identifiers that are not Python keywords")
    mode = data.get("strata_mode", "auto")
    divs = []
    raw_divs = data.get("divisors")
    if not isinstance(raw_divs, list):
        raise ScenarioError(f"{where}: divisors", "expected a list")
    for k, entry in enumerate(raw_divs):
        loc = f"{where}: divisors[{k}]"
        if not isinstance(entry, dict) or not isinstance(entry.get("label"), str):
            raise ScenarioError(loc, "expected an object with a string label")
        text = entry.get("poly")
        if text is None:
            divs.append(Divisor(entry["label"]))
            continue
        if not isinstance(text, str):
            raise ScenarioError(f"{loc}.poly", "expected polynomial text")
        try:
            divs.append(Divisor(entry["label"], P.parse(text, variables)))
        except P.PolynomialError as exc:
            raise ScenarioError(f"{loc}.poly", str(exc)) from None
    strata = []
    for k, entry in enumerate(data.get("strata", [])):
        loc = f"{where}: strata[{k}]"
        if not isinstance(entry, dict) or not isinstance(entry.get("support"), list):
            raise ScenarioError(loc, "expected an object with a support list")
        strata.append(StratumSpec(tuple(entry["support"]), int(entry.get("component", 0)),
                                  tuple(entry.get("contained_in", ()))))
    d_max = data.get("d_max", 0)
    if not isinstance(d_max, int) or isinstance(d_max, bool) or d_max < 0:
        raise ScenarioError(f"{where}: d_max", "expected a nonnegative integer")
    try:
        arr = Arrangement(tuple(variables), tuple(divs), mode, tuple(strata))
    except ArrangementError as exc:
        raise ScenarioError(where, str(exc)) from None
    return arr, d_max


def load_scenario(path: str | Path) -> Scenario:
    raw, data = _read(path)
    arr, d_max = parse_scenario(data, str(path))
    return Scenario(arr, d_max, digest_bytes(raw), str(path))


def load_correspondence(path: str | Path) -> tuple[StratumCorrespondence, bytes]:
    raw, data = _read(path)
    labels = data.get("labels")
    if not isinstance(labels, dict) or not all(isinstance(k, str) and isinstance(v, str)
                                               for k, v in labels.items()):
        raise ScenarioError(f"{path}: labels", "expected an object mapping labels to labels")
    strata = data.get("strata")
    if strata is not None and not isinstance(strata, dict):
        raise ScenarioError(f"{path}: strata", "expected an object mapping stratum ids")
    return StratumCorrespondence(dict(labels), strata), raw


def bundled(name: str) -> Path:
    """Path of a scenario file shipped with the package."""
    with resources.as_file(resources.files("strata_lab") / "data" / name) as p:
        return Path(p)
