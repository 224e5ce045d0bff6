"""Randomized checks of the structure theorems, one named property per check."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .bundles import restrict_bundle, verify_round_trip
from .errors import Certificate, InvariantBreach, ValidationError
from .gspace import quotient, trivial_action_report, verify_formY, verify_rest_bijection
from .orbitcat import verify_c2, verify_orbitcat_iso
from .randomgen import random_bundle, random_groupoid, random_space


@dataclass(frozen=True)
class Limits:
    max_objects: int = 4
    max_group: int = 8
    max_points: int = 20


def _formY(rng, lim):
    G, b = random_groupoid(rng, lim.max_objects, lim.max_group)
    return verify_formY(random_space(rng, G, b, lim.max_points), b)


def _rest(rng, lim):
    G, b = random_groupoid(rng, lim.max_objects, lim.max_group)
    half = max(lim.max_points // 2, 1)
    Y = random_space(rng, G, b, half)
    X = random_space(rng, G, b, half)
    return verify_rest_bijection(Y, X, b)


def _quots(rng, lim):
    G, b = random_groupoid(rng, lim.max_objects, lim.max_group)
    return quotient(random_space(rng, G, b, lim.max_points), b).certificate


def _triv(rng, lim):
    G, b = random_groupoid(rng, lim.max_objects, lim.max_group)
    Y = random_space(rng, G, b, lim.max_points, trivial=rng.random() < 0.5)
    return trivial_action_report(Y, b)


def _c2(rng, lim):
    G, b = random_groupoid(rng, lim.max_objects, lim.max_group)
    return verify_c2(random_space(rng, G, b, lim.max_points), b)


def _orbitcat(rng, lim):
    G, b = random_groupoid(rng, lim.max_objects, lim.max_group)
    return verify_orbitcat_iso(G, b)


def _bundle(rng, lim):
    G, b, Bb, B = random_bundle(rng, min(lim.max_objects, 3), min(lim.max_group, 4), min(lim.max_points, 16))
    restrict_bundle(B, b)        # raises if the restriction is not a bundle
    cert = verify_round_trip(G, b, B=B, Bb=Bb)
    cert.data["points"] = len(B)
    return cert


PROPS: dict[str, Callable[[random.Random, Limits], Certificate]] = {
    "formY": _formY,
    "rest": _rest,
    "quots": _quots,
    "triv": _triv,
    "c2": _c2,
    "orbitcat": _orbitcat,
    "bundle": _bundle,
}


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}/{trial}")


@dataclass
class VerifyReport:
    prop: str
    seed: int
    trials: int
    passed: int = 0
    failures: list = field(default_factory=list)
    details: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.passed == self.trials

    def to_json(self) -> dict:
        out = {"command": "verify", "prop": self.prop, "seed": self.seed, "trials": self.trials,
               "passed": self.passed, "failed": len(self.failures), "ok": self.ok}
        if self.failures:
            out["first_failure"] = self.failures[0]
        out["per_trial"] = self.details
        return out


def run_prop(prop: str, seed: int, trials: int, limits: Limits | None = None) -> VerifyReport:
    if prop not in PROPS:
        raise KeyError(f"unknown property {prop!r}; choose from {', '.join(PROPS)}")
    limits = limits or Limits()
    check = PROPS[prop]
    rep = VerifyReport(prop, seed, trials)
    for t in range(trials):
        rng = trial_rng(seed, t)
        try:
            cert = check(rng, limits)
        except (ValidationError, InvariantBreach) as exc:
            cert = Certificate(prop, False, {"error": type(exc).__name__, "message": str(exc)})
        entry = {"trial": t, "ok": cert.ok}
        if cert.data:
            entry["data"] = _jsonable(cert.data)
        rep.details.append(entry)
        if cert.ok:
            rep.passed += 1
        else:
            rep.failures.append({"trial": t, "witness": _jsonable(cert.witness)})
    return rep


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)
