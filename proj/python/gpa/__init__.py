"""Python access to the gpa core library."""

import json

from . import _gpa
from ._gpa import DomainError, InternalError, height, render, run_cli

__all__ = ["DomainError", "InternalError", "height", "render", "run_cli", "words", "classify", "orbit", "track",
           "spectrum", "outside", "census"]


def words(q):
    return json.loads(_gpa.words(q))


def classify(s):
    return json.loads(_gpa.classify(s))


def orbit(s):
    return json.loads(_gpa.orbit(s))


def track(s, depth=None):
    return json.loads(_gpa.track(s, depth))


def spectrum(s, depth=None):
    return json.loads(_gpa.spectrum(s, depth))


def outside(s):
    return json.loads(_gpa.outside(s))


def census(s, depth=None):
    return json.loads(_gpa.census(s, depth))
