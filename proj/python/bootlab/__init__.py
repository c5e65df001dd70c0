"""Python access to the bootlab core. Families, trees and sites are plain JSON-shaped values."""

import json

from . import _bootlab
from ._bootlab import BootlabError, suite_names, wilson_interval

__all__ = [
    "BootlabError",
    "neighbour_family",
    "classify",
    "is_stable",
    "torus_closure",
    "construct_tree",
    "verify_tree",
    "span",
    "constants",
    "estimate_pc",
    "suite_names",
    "check",
    "scan",
    "wilson_interval",
]


def _dump(x):
    return x if isinstance(x, str) else json.dumps(x)


def neighbour_family(r, d):
    return json.loads(_bootlab.neighbour_family(r, d))


def classify(family):
    return json.loads(_bootlab.classify(_dump(family)))


def is_stable(family, direction):
    return _bootlab.is_stable(_dump(family), list(direction))


def torus_closure(family, sites, n):
    return json.loads(_bootlab.torus_closure(_dump(family), _dump(sites), n))


def construct_tree(family):
    return json.loads(_bootlab.construct_tree(_dump(family)))


def verify_tree(family, tree):
    return json.loads(_bootlab.verify_tree(_dump(family), _dump(tree)))


def span(family, sites, tree=None):
    """Root icebergs spanned by the sites."""
    return json.loads(_bootlab.span(_dump(family), "" if tree is None else _dump(tree), _dump(sites)))


def constants(family, seed, tree=None, slack_samples=80):
    return json.loads(_bootlab.constants(_dump(family), "" if tree is None else _dump(tree), seed, slack_samples))


def estimate_pc(family, n, seed, trials=100, tol=1e-3, jobs=1):
    return json.loads(_bootlab.estimate_pc(_dump(family), n, trials, tol, seed, jobs))


def check(suite, seed, samples=100):
    return json.loads(_bootlab.check(suite, samples, seed))


def scan(lemma, family=None):
    return json.loads(_bootlab.scan(lemma, "" if family is None else _dump(family)))
