"""Named test varieties and the spec-file loader shared by tests, demos and CLI."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

from .field import PrimeField
from .poly import Ambient, parse_poly
from .ring import Ideal, JacobianData, QuotientRing


@dataclass
class VarietySpec:
    p: int
    vars: List[str]
    ideal: List[str] = field(default_factory=list)
    order: str = "grevlex"
    N: int = 8
    K_max: int = 3
    seed: int = 0
    slack: int = 4

    @classmethod
    def from_dict(cls, d: dict) -> "VarietySpec":
        known = {k: d[k] for k in cls.__dataclass_fields__ if k in d}
        extra = sorted(set(d) - set(known))
        if extra:
            raise ValueError("unknown spec field(s): %s" % ", ".join(extra))
        if "p" not in known or "vars" not in known:
            raise ValueError("spec needs 'p' and 'vars'")
        return cls(**known)

    @classmethod
    def from_json(cls, text: str) -> "VarietySpec":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return asdict(self)


class Variety:
    """Ambient, ideal and Jacobian data for one spec."""

    def __init__(self, spec: VarietySpec):
        PrimeField(spec.p)  # validates p
        self.spec = spec
        self.ambient = Ambient(spec.p, spec.vars)
        self.ideal = Ideal([parse_poly(g, self.ambient) for g in spec.ideal], self.ambient, spec.order)
        self._jd: Optional[JacobianData] = None

    @property
    def jd(self) -> JacobianData:
        if self._jd is None:
            self._jd = JacobianData(self.ideal)
        return self._jd

    @property
    def A(self) -> QuotientRing:
        return self.ideal.quotient_ring()

    def poly(self, text: str):
        return parse_poly(text, self.ambient)

    def __repr__(self):
        return "Variety(p=%d, %s)" % (self.spec.p, self.spec.ideal)


FIXTURES: Dict[str, dict] = {
    "AFFINE": {"p": 5, "vars": ["x1", "x2"], "ideal": []},
    "CIRCLE": {"p": 5, "vars": ["x1", "x2"], "ideal": ["x1^2 + x2^2 - 1"]},
    "CUSP": {"p": 7, "vars": ["x1", "x2"], "ideal": ["x2^2 - x1^3"]},
    "HYPER": {"p": 7, "vars": ["x1", "x2"], "ideal": ["x2^2 - x1^3 - x1"]},
    "TWISTED": {"p": 5, "vars": ["x1", "x2", "x3"], "ideal": ["x2 - x1^2", "x3 - x1^3"]},
    "SPHERE3": {"p": 5, "vars": ["x1", "x2", "x3"], "ideal": ["x1^2 + x2^2 + x3^2 - 1"]},
}

_loaded: Dict[str, Variety] = {}


def fixture(name: str) -> Variety:
    """A cached Variety for one of the named fixtures."""
    v = _loaded.get(name)
    if v is None:
        v = Variety(VarietySpec.from_dict(FIXTURES[name]))
        _loaded[name] = v
    return v
