"""Reading interchange files.  Each file is a JSON object with "kind" and "version"."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .bredon import CoefficientSystem, validate_coefficient_system
from .bundles import PrincipalBundle, validate_bundle
from .errors import ValidationError, Violation
from .gcw import GCWComplex, validate_gcw
from .groupoid import FiniteGroupoid, validate_groupoid
from .groups import FiniteGroup
from .gspace import FiniteGSpace, validate_gspace
from .orbitcat import build_orbit_category

VERSION = 1
KINDS = ("groupoid", "gspace", "gcw", "coefficients", "bundle")


class ParseError(Exception):
    """Unreadable file or malformed JSON; ``line``/``column`` locate JSON syntax errors."""

    def __init__(self, path, message, line=None, column=None):
        self.path, self.line, self.column = str(path), line, column
        where = f":{line}:{column}" if line is not None else ""
        super().__init__(f"{path}{where}: {message}")

    def to_json(self) -> dict:
        out = {"path": self.path, "message": str(self)}
        if self.line is not None:
            out.update(line=self.line, column=self.column)
        return out


def read_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(path, exc.strerror or str(exc)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(path, exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError(path, "top level must be a JSON object")
    return doc


def _header(doc: Mapping, what: str | None = None) -> str:
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ValidationError("file", [Violation("kind", f"unknown kind {kind!r}; expected one of {KINDS}", kind)])
    if what is not None and kind != what:
        raise ValidationError("file", [Violation("kind", f"expected a {what} file, got {kind}", kind)])
    if doc.get("version") != VERSION:
        raise ValidationError("file", [Violation("version", f"unsupported version {doc.get('version')!r}",
                                                 doc.get("version"))])
    return kind


def _inline_groupoid(doc: Mapping) -> FiniteGroupoid:
    if not isinstance(doc.get("groupoid"), Mapping):
        raise ValidationError("file", [Violation("schema", "missing inline 'groupoid'")])
    return validate_groupoid(doc["groupoid"])


def _group(doc: Mapping) -> FiniteGroup:
    try:
        g = doc["group"]
        return FiniteGroup.from_triples(list(g["elements"]), [tuple(t) for t in g["compose"]])
    except (KeyError, TypeError) as exc:
        raise ValidationError("file", [Violation("schema", f"missing or malformed 'group': {exc}")])


def build(doc: Mapping, what: str | None = None) -> Any:
    """Validate a parsed document and return the object it describes."""
    kind = _header(doc, what)
    if kind == "groupoid":
        return validate_groupoid(doc)
    if kind == "gspace":
        return validate_gspace(_inline_groupoid(doc), doc)
    if kind == "bundle":
        return validate_bundle(_inline_groupoid(doc), doc)
    if kind == "gcw":
        return validate_gcw(doc)
    return validate_coefficient_system(build_orbit_category(_group(doc)), doc)


def load(path, what: str | None = None) -> Any:
    return build(read_json(path), what)


def load_coefficients_for(path, X: GCWComplex) -> CoefficientSystem:
    """Coefficient file read against the orbit category of ``X``'s group."""
    doc = read_json(path)
    _header(doc, "coefficients")
    return validate_coefficient_system(build_orbit_category(X.group), doc)


def summary(obj) -> dict:
    """Short description of a validated object for reports."""
    if isinstance(obj, FiniteGroupoid):
        return {"objects": len(obj.objects), "arrows": len(obj.arrows)}
    if isinstance(obj, FiniteGSpace):
        return {"points": len(obj), "orbits": len(obj.orbits())}
    if isinstance(obj, PrincipalBundle):
        return {"points": len(obj), "base": len(obj.base)}
    if isinstance(obj, GCWComplex):
        return {"group_order": obj.group.order, "cells": obj.sizes, "dim": obj.dim}
    if isinstance(obj, CoefficientSystem):
        return {"variance": obj.variance,
                "values": {k: v.to_json() for k, v in obj.values().items()}}
    return {}
