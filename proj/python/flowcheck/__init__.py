"""Flow graph verification engine."""

import json

from . import _flowcheck
from ._flowcheck import Inconclusive, InputError

__all__ = ["Inconclusive", "InputError", "solve_flow", "check_scenario",
           "check_theorem", "fuzz"]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def solve_flow(doc):
    """Per-node flow of a graph or heap document."""
    return json.loads(_flowcheck.solve_flow(_text(doc)))


def check_scenario(doc, seed=0, closure_cap=4096):
    """Scenario report as a dict."""
    return json.loads(_flowcheck.check_scenario(_text(doc), seed, closure_cap))


def check_theorem(name, nodes=None, cases=None, seed=0):
    """Theorem report as a dict."""
    return json.loads(_flowcheck.check_theorem(name, nodes, cases, seed))


def fuzz(cases=20, ops=50, seed=0):
    """Tree operation fuzz report as a dict."""
    return json.loads(_flowcheck.fuzz(cases, ops, seed))
