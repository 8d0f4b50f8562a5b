"""Loading Steenrod tables, bundle models and bordism tables from fixture files.

Fixtures are looked up by name (``paper-verbatim-p3``) or path.  The search
path is the directories in ``$CHARCLASS_FIXTURES`` (os.pathsep separated)
followed by the fixtures shipped with the package.
"""
from __future__ import annotations

import os
import re
from importlib import resources
from pathlib import Path

import yaml

from .algebra import GF, QQ, RingPresentation, bso, parse_bso_name
from .errors import ConfigurationError, FixtureNotFoundError, ParseError
from .steenrod import SteenrodTable
from .thom import BundleModel, _total_ring

ENV_VAR = "CHARCLASS_FIXTURES"
_SUFFIXES = ("", ".yaml", ".yml", ".txt")


def search_path() -> list[Path]:
    dirs = [Path(d) for d in os.environ.get(ENV_VAR, "").split(os.pathsep) if d]
    dirs.append(Path(str(resources.files("charclass") / "fixtures")))
    return dirs


def find_fixture(name: str | os.PathLike) -> Path:
    p = Path(name)
    if p.is_file():
        return p
    for d in search_path():
        for suffix in _SUFFIXES:
            cand = d / f"{name}{suffix}"
            if cand.is_file():
                return cand
    raise FixtureNotFoundError(f"fixture {str(name)!r} not found in {[str(d) for d in search_path()]}")


def list_fixtures() -> list[str]:
    names = set()
    for d in search_path():
        if d.is_dir():
            names.update(f.stem for f in d.iterdir() if f.suffix in (".yaml", ".yml", ".txt"))
    return sorted(names)


def _load_yaml(name) -> dict:
    path = find_fixture(name)
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a mapping at top level")
    return data


# --------------------------------------------------------------------------
# Steenrod tables

_WU_RE = re.compile(r"\s*u\s*\*\s*\((.*)\)\s*$", re.S)


def table_from_dict(data: dict, truncation: int | None = None) -> SteenrodTable:
    try:
        prime = int(data["prime"])
        pres = data["presentation"]
        gens = data.get("generators") or {}
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"malformed Steenrod table: {exc}") from exc
    n = parse_bso_name(pres)
    if n is None:
        raise ConfigurationError(f"unsupported presentation {pres!r}; expected BSO(n)")
    known = [int((w or {}).get("known_degree", 0)) for w in (data.get("wu") or {}).values()]
    trunc = truncation or max([64, 4 * prime * (n // 2)] + known)
    ring = bso(n, prime, trunc)
    actions = {}
    for g, entry in gens.items():
        if not ring.has(g):
            raise ConfigurationError(f"generator {g!r} is not in {pres}")
        entry = dict(entry or {})
        deg = entry.pop("degree", None)
        if deg is not None and int(deg) != ring.degrees[ring.index(g)]:
            raise ConfigurationError(f"{g} has degree {ring.degrees[ring.index(g)]}, fixture says {deg}")
        acts = {}
        for key, val in entry.items():
            m = re.fullmatch(r"P\^(\d+)", str(key))
            if not m:
                raise ConfigurationError(f"unknown key {key!r} under {g}")
            acts[int(m.group(1))] = ring.parse(str(val))
        actions[g] = acts
    wu = {}
    for label, entry in (data.get("wu") or {}).items():
        m = re.fullmatch(r"u_(-?\d+)", str(label))
        if not m:
            raise ConfigurationError(f"bad Thom class label {label!r}")
        mm = _WU_RE.match(str(entry["P(u)"]))
        if not mm:
            raise ParseError(f"Wu entry must read 'u * (...)', got {entry['P(u)']!r}")
        wu[int(m.group(1))] = (ring.parse(mm.group(1)), int(entry.get("known_degree", 0)))
    return SteenrodTable(str(data.get("name", "table")), prime, ring, actions, wu)


def load_table(name) -> SteenrodTable:
    return table_from_dict(_load_yaml(name))


# --------------------------------------------------------------------------
# bundle models

_REL_RE = re.compile(r"\s*([A-Za-z][A-Za-z0-9_]*)\s*\^\s*(\d+)\s*=\s*(.+?)\s*$")


def parse_relation(text: str) -> tuple[str, int, str]:
    """``"h^3 = 0"`` -> ("h", 3, "0")."""
    m = _REL_RE.match(str(text))
    if not m:
        raise ParseError(f"relation must read 'g^k = expr', got {text!r}")
    return m.group(1), int(m.group(2)), m.group(3)


def model_from_dict(data: dict) -> BundleModel:
    try:
        base_d, fibre_d = data["base"], data["fibre"]
        fibre_dim = int(data["fibre_dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"malformed bundle model: {exc}") from exc
    prime = data.get("prime")
    field = GF(int(prime)) if prime else QQ
    base = RingPresentation(
        list((base_d.get("generators") or {}).items()),
        [parse_relation(r) for r in base_d.get("relations") or []],
        field=field,
        name=base_d.get("name"),
    )
    fibre = list((fibre_d.get("generators") or {}).items())
    total = _total_ring(base, fibre, [parse_relation(r) for r in fibre_d.get("relations") or []])
    fundamental = None
    if base_d.get("fundamental") is not None:
        fpoly = base.parse(str(base_d["fundamental"]))
        if len(fpoly) != 1 or fpoly.terms()[0][1] != field.one:
            raise ConfigurationError("the fundamental class must be a single monic monomial")
        fundamental = fpoly.terms()[0][0]
    vertical = {k: str(v) for k, v in (data.get("vertical") or {}).items()}
    tangent = {k: str(v) for k, v in (base_d.get("tangent_pontryagin") or {}).items()}
    return BundleModel(
        str(data.get("name", "model")), base, total, tuple(n for n, _ in fibre),
        fibre_dim, vertical, tangent, fundamental,
    )


def load_model(name) -> BundleModel:
    return model_from_dict(_load_yaml(name))


# --------------------------------------------------------------------------
# bordism groups

def parse_bordism(text: str) -> dict[int, str]:
    """Lines ``n<TAB>group``; '#' starts a comment."""
    table = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or not parts[0].isdigit():
            raise ParseError(f"bordism table line {lineno}: expected 'n group', got {line!r}")
        table[int(parts[0])] = parts[1]
    return table


def load_bordism(name="bordism") -> dict[int, str]:
    return parse_bordism(find_fixture(name).read_text())
