"""Scalar-type standing waves of coupled cubic NLS systems (Python front end)."""

import json

from ._nlss import (  # noqa: F401
    ConvergenceError,
    cv_to_lambdas,
    lambdas_to_cv,
    profile_norms,
    run_cli,
    transform_lambdas,
)
from . import _nlss

__all__ = [
    "ConvergenceError",
    "cli",
    "cv_to_lambdas",
    "eval_g",
    "g_min",
    "lambdas",
    "lambdas_to_cv",
    "profile_norms",
    "run_cli",
    "transform_lambdas",
]


class CliError(RuntimeError):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _system(system):
    return system if isinstance(system, str) else json.dumps(system)


def g_min(system):
    """Minimum of g on the unit sphere; `system` is a dict like {"standard_form": "NLS3", "params": {...}}."""
    return _nlss.g_min(_system(system))


def eval_g(system, z1, z2):
    return _nlss.eval_g(_system(system), complex(z1), complex(z2))


def lambdas(system):
    return list(_nlss.lambdas(_system(system)))


def cli(*args):
    """Run a subcommand and parse its JSON output."""
    code, out, err = run_cli([str(a) for a in args])
    if code != 0:
        raise CliError(code, err.strip())
    return json.loads(out)
