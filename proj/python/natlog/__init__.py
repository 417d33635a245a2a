"""Python bindings for the natlog tableau prover."""

import json

from ._natlog import NatlogError, normalize
from . import _natlog

__all__ = ["NatlogError", "normalize", "llf", "classify", "prove"]


def _config(options):
    return json.dumps(options)


def llf(derivations, first=False, scope_cap=8, **options):
    """Map sentence id to its list of LLF readings."""
    return dict(_natlog.llf(derivations, first, scope_cap, _config(options)))


def classify(problems, derivations="", **options):
    """Classify a problem document; options use the config file keys."""
    return [json.loads(line) for line in _natlog.classify(problems, derivations, _config(options))]


def prove(nodes, format="text", **options):
    """Render the tableau for initial nodes written as 'llf : args : sign'."""
    out = _natlog.prove(list(nodes), format, _config(options))
    return json.loads(out) if format == "json" else out
