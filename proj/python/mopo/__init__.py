# Copyright 2026 The mopo Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Exact multi-objective analysis of finite POMDPs.

Rationals are ``fractions.Fraction`` and infinities are ``float('inf')``.
Strategies, mixtures and certificates travel as JSON; the helpers below
return them parsed.
"""

import json as _json

from ._mopo import (
    DimensionMismatch,
    DisabledAction,
    DomainError,
    EmptySupport,
    Error,
    InfeasibleApproximation,
    InputError,
    MalformedHistory,
    MalformedLasso,
    NotAchievable,
    NotDominated,
    NotInHull,
    ParseError,
    Pool,
    PoolTooLarge,
    PreconditionViolated,
    Problem,
    SchemaError,
    SingularSystem,
    UndefinedExpectation,
    UnknownScc,
    UnknownState,
    UnsupportedKind,
    extreme_points,
    in_hull,
    lex_optimize,
    mix_vectors,
    pareto_frontier,
)
from . import _mopo

__version__ = "0.1.0"


def _strategy_text(strategy):
    return strategy if isinstance(strategy, str) else _json.dumps(strategy)


def evaluate(problem, strategy, state=None):
    """Exact payoff vector of a strategy (JSON text or dict)."""
    return problem.evaluate(_strategy_text(strategy), state)


def estimate(problem, strategy, samples=10000, horizon=64, seed=0, jobs=1, state=None):
    """Seeded Monte-Carlo estimate; returns a dict of per-dimension lists."""
    return problem.estimate(_strategy_text(strategy), samples, horizon, seed, jobs, state)


def achieve(problem, pool, target, mode="equals"):
    """Certificate dict for a mixture of pool members meeting `target`."""
    return _json.loads(_mopo.achieve(problem, pool, list(target), mode))


def approximate(problem, pool, target, eps, big_m):
    """Certificate dict for an eps/M approximation of a possibly infinite target."""
    return _json.loads(_mopo.approximate(problem, pool, list(target), eps, big_m))


def convex_hull(points):
    """Hull of rational points as a dict (vertices, facets, equalities)."""
    return _json.loads(_mopo.convex_hull_json([list(p) for p in points]))


__all__ = [name for name in dir() if not name.startswith("_")]
