"""Experiment configuration: flat ``key = value`` files with one section per experiment.

Example::

    [stability]
    family = SK
    n = 12
    variant = single_block
    epsilon = 0.25
    replications = 50
    seed = 1

List-valued keys (``n``, ``shape``, ``epsilon``, ``c``) take comma-separated values;
EA boxes are written ``3x4``.
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import asdict, dataclass, field, fields, replace

from .errors import ParseError, StabilityLabError, ValidationError
from .laws import LAW_NAMES
from .problem import FAMILIES, VARIANTS, ProblemInstance, get_family

KINDS = ("calibrate", "stability", "tightness", "oracle-check")


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    family: str
    n: tuple = (10,)
    d: int = 2
    q: float = 1.0
    shape: tuple = ()  # tuple of EA boxes, each a tuple of side lengths
    alpha: float = 1.0
    progeny: tuple = (0.0, 0.0, 1.0)
    graph_kind: str = "tour"
    law: str | None = None
    law_params: tuple = ()
    variant: str = "single_block"
    epsilon: tuple = (0.25,)
    c: tuple = (1.0,)
    replications: int = 10
    seed: int = 0
    block_subsample: int | None = None
    timings: bool = False
    out: str = "results"
    format: str = "csv"

    def sizes(self) -> list:
        """(n, shape) pairs of the size grid; EA boxes set n to the site count."""
        if self.family == "EA":
            return [(math.prod(s), s) for s in self.shape]
        return [(n, ()) for n in self.n]

    def instance(self, n: int, shape: tuple = (), rng_seed: int = 0, family: str | None = None) -> ProblemInstance:
        return ProblemInstance(family=family or self.family, n=n, d=self.d, q=self.q, shape=shape,
                               alpha=self.alpha, progeny=self.progeny, graph_kind=self.graph_kind,
                               law=self.law, law_params=self.law_params, rng_seed=rng_seed)

    def as_dict(self) -> dict:
        return asdict(self)


_TYPES = {f.name: f.type for f in fields(ExperimentSpec)}


def _floats(text: str) -> tuple:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _shape(text: str) -> tuple:
    return tuple(int(v) for v in text.lower().split("x"))


_PARSERS = {
    "kind": str.strip,
    "family": str.strip,
    "n": lambda t: tuple(int(v) for v in t.split(",") if v.strip()),
    "d": int,
    "q": float,
    "shape": lambda t: tuple(_shape(v.strip()) for v in t.split(",") if v.strip()),
    "alpha": float,
    "progeny": _floats,
    "graph_kind": str.strip,
    "law": lambda t: t.strip() or None,
    "law_params": _floats,
    "variant": str.strip,
    "epsilon": _floats,
    "c": _floats,
    "replications": int,
    "seed": int,
    "block_subsample": lambda t: int(t) if t.strip() else None,
    "timings": lambda t: t.strip().lower() in ("1", "true", "yes", "on"),
    "out": str.strip,
    "format": str.strip,
}


def parse_config(text: str, kind: str | None = None, source: str = "<config>") -> ExperimentSpec:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"),
                                   default_section="__none__")
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as e:
        raise ParseError(f"{source}: {e}") from None
    sections = cp.sections()
    if not sections:
        raise ParseError(f"{source}: no [section] found")
    if kind is not None and kind in sections:
        name = kind
    elif len(sections) == 1:
        name = sections[0]
    else:
        raise ParseError(f"{source}: several sections and none named {kind!r}")
    raw = dict(cp[name])
    if "kind" not in raw:
        raw["kind"] = kind or name
    values = {}
    for key, text_value in raw.items():
        if key not in _PARSERS:
            raise ParseError(f"{source}: unknown key {key!r} in section [{name}]")
        try:
            values[key] = _PARSERS[key](text_value)
        except ValueError as e:
            raise ParseError(f"{source}: bad value for {key!r}: {text_value!r} ({e})") from None
    if "family" not in values:
        raise ValidationError(f"{source}: 'family' is required")
    spec = ExperimentSpec(**values)
    if kind is not None and spec.kind != kind:
        raise ValidationError(f"config describes a {spec.kind!r} experiment, not {kind!r}")
    validate(spec)
    return spec


def load_config(path, kind: str | None = None) -> ExperimentSpec:
    if not os.path.exists(path):
        raise ParseError(f"config file {path} not found")
    with open(path) as fh:
        return parse_config(fh.read(), kind, str(path))


def validate(spec: ExperimentSpec) -> None:
    if spec.kind not in KINDS:
        raise ValidationError(f"kind must be one of {KINDS}, got {spec.kind!r}")
    fams = FAMILIES + ("all",) if spec.kind == "oracle-check" else FAMILIES
    if spec.family not in fams:
        raise ValidationError(f"family must be one of {fams}, got {spec.family!r}")
    if spec.replications < 1:
        raise ValidationError("replications must be >= 1")
    if not spec.epsilon or any(not 0 < e < 1 for e in spec.epsilon):
        raise ValidationError("every epsilon must lie in (0, 1)")
    if not spec.c or any(c <= 0 for c in spec.c):
        raise ValidationError("window constants c must be positive")
    if spec.variant not in VARIANTS:
        raise ValidationError(f"variant must be one of {VARIANTS}")
    if spec.law is not None and spec.law not in LAW_NAMES:
        raise ValidationError(f"law must be one of {LAW_NAMES}")
    if spec.format not in ("csv", "json"):
        raise ValidationError("format must be csv or json")
    if spec.block_subsample is not None and spec.block_subsample < 1:
        raise ValidationError("block_subsample must be positive")
    if spec.seed < 0 or spec.seed >= 2**64:
        raise ValidationError("seed must be a 64-bit unsigned integer")
    if spec.family == "all":
        return
    if spec.family == "EA" and not spec.shape:
        raise ValidationError("EA needs shape = AxB[,CxD...]")
    if spec.variant not in get_family(spec.family).variants:
        raise ValidationError(f"{spec.family} supports variants {get_family(spec.family).variants}")
    for n, shape in spec.sizes():
        try:
            inst = spec.instance(n, shape)
        except ValidationError:
            raise
        except (StabilityLabError, ValueError) as e:
            raise ValidationError(str(e)) from None
        if spec.kind == "tightness":
            _check_enumerable(inst)


# exhaustive near-optimal sets are only affordable below these sizes
ENUM_CAPS = {"TSP": 10, "MST": 8, "Assignment": 8, "SK": 22, "EA": 22, "BRW": 40}


def _check_enumerable(inst: ProblemInstance) -> None:
    if inst.family in ("Wigner", "Wishart"):
        raise ValidationError(f"{inst.family} has a continuous solution space; tightness needs enumeration")
    if inst.family == "WeightedGraph":
        cap = {"tour": 10, "mst": 8, "matching": 16}[inst.graph_kind]
    else:
        cap = ENUM_CAPS[inst.family]
    size = get_family(inst.family).size(inst)
    if size > cap:
        raise ValidationError(f"{inst.family} near-optimal enumeration is capped at {cap}, got {size}")


def with_overrides(spec: ExperimentSpec, **kw) -> ExperimentSpec:
    kw = {k: v for k, v in kw.items() if v is not None}
    out = replace(spec, **kw)
    validate(out)
    return out
