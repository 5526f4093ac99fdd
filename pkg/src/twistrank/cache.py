"""Persistent class-data cache: newline-delimited JSON keyed by discriminant.

Each line is an object {"delta": ..., "h": ..., "three_torsion": ...} with
keys in sorted order.  The cache only ever gains entries; rewrites go through
a temporary file and an atomic rename, so a crash can never leave a
half-written cache behind.  Single writer assumed.
"""

from __future__ import annotations

import json
import os
import tempfile

from .classgroup import summary_from_counts

CACHE_ENV_VAR = "TWISTRANK_CACHE"

ClassData = dict[int, tuple[int, int]]
BadLine = tuple[int, str, str]  # (line number, raw text, reason)


class CacheCorruption(ValueError):
    """A cache file failed validation; bad_lines lists every offender."""

    def __init__(self, path: str, bad_lines: list[BadLine]):
        self.path = path
        self.bad_lines = bad_lines
        head = ", ".join(f"line {n}: {reason}" for n, _, reason in bad_lines[:3])
        more = "" if len(bad_lines) <= 3 else f" (+{len(bad_lines) - 3} more)"
        super().__init__(f"corrupt cache {path}: {head}{more}")


def default_path() -> str | None:
    """Cache location from the environment, if configured."""
    return os.environ.get(CACHE_ENV_VAR) or None


def _parse_line(line: str) -> tuple[int, tuple[int, int]]:
    obj = json.loads(line)
    if not isinstance(obj, dict) or set(obj) != {"delta", "h", "three_torsion"}:
        raise ValueError("keys must be exactly delta, h, three_torsion")
    delta, h, torsion = obj["delta"], obj["h"], obj["three_torsion"]
    for name, v in (("delta", delta), ("h", h), ("three_torsion", torsion)):
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValueError(f"{name} must be an integer")
    # re-derives the 3-rank, so this also rejects torsion values that are not
    # powers of 3 or do not divide h
    summary_from_counts(delta, h, torsion)
    return delta, (h, torsion)


def scan_lines(path: str) -> tuple[ClassData, list[BadLine]]:
    """Read a cache, keeping valid entries and collecting invalid lines.

    Later duplicates of a discriminant must agree with the first occurrence;
    a conflicting duplicate is reported as corrupt rather than resolved.
    """
    data: ClassData = {}
    bad: list[BadLine] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                delta, pair = _parse_line(line)
            except (ValueError, ArithmeticError) as exc:
                bad.append((lineno, raw.rstrip("\n"), str(exc)))
                continue
            if delta in data and data[delta] != pair:
                bad.append(
                    (lineno, raw.rstrip("\n"), f"conflicts with earlier entry for {delta}")
                )
                continue
            data[delta] = pair
    return data, bad


def load(path: str) -> ClassData:
    """Load a cache, raising CacheCorruption if any line fails validation."""
    data, bad = scan_lines(path)
    if bad:
        raise CacheCorruption(path, bad)
    return data


def _write_atomic(path: str, data: ClassData) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cache-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            for delta in sorted(data):
                h, torsion = data[delta]
                fh.write(
                    json.dumps(
                        {"delta": delta, "h": h, "three_torsion": torsion},
                        sort_keys=True,
                    )
                    + "\n"
                )
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save(path: str, data: ClassData) -> None:
    """Write the cache atomically, entries sorted by discriminant.

    Entries already on disk are preserved: the stored file becomes the union
    of the existing valid entries and data.
    """
    merged: ClassData = {}
    if os.path.exists(path):
        merged.update(load(path))
    for delta, pair in data.items():
        if delta in merged and merged[delta] != pair:
            raise CacheCorruption(
                path, [(0, "", f"new entry for {delta} conflicts with stored value")]
            )
        merged[delta] = pair
    _write_atomic(path, merged)


def quarantine(path: str) -> tuple[int, int]:
    """Strip corrupt lines from a cache, appending them to path + '.quarantined'.

    Returns (entries kept, lines quarantined).  The cleaned cache is written
    atomically; the original bad lines stay readable in the side file.
    """
    data, bad = scan_lines(path)
    if bad:
        with open(path + ".quarantined", "a", encoding="utf-8") as fh:
            for lineno, raw, reason in bad:
                fh.write(f"# line {lineno}: {reason}\n{raw}\n")
        _write_atomic(path, data)
    return len(data), len(bad)
