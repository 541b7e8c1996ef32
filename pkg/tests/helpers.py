"""Shared loaders for the test-suite; sessions are cached per process."""

from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

from transsasakian import fixture_path, load_manifest
from transsasakian.pipeline import Session

DATA = Path(__file__).parent / "data"
FIXTURES = ("example5d", "example5d_corrupt_phi", "flat5d", "negcontrol5d", "milne5d")


@lru_cache(maxsize=None)
def session(name: str) -> Session:
    return Session(load_manifest(fixture_path(name)))


@lru_cache(maxsize=None)
def golden() -> dict:
    return json.loads((DATA / "golden.json").read_text())


def ex(text, sess: Session | None = None):
    """Parse expression text on the example chart."""
    sess = sess or session("example5d")
    return sess.manifest.chart.expr(text)


def frame_vec(strings, sess: Session | None = None):
    sess = sess or session("example5d")
    return sess.M.vec([sess.manifest.chart.expr(s) for s in strings])
