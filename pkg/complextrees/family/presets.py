# ComplexTrees/family/presets.py

import cmath
import math
from functools import lru_cache
from typing import Callable, Dict, Optional

import numpy as np

from complextrees.core import Alphabet, Relation
from complextrees.errors import InputError, UnknownPreset

from .family import ParametricFamily
from .rational import RationalFunction
from .refine import refine_alphabet

Z = RationalFunction.variable()


def _relations(*texts: str) -> frozenset:
    return frozenset(Relation.parse(t) for t in texts)


def _snap(value: complex, eps: float = 1e-15) -> complex:
    re = 0.0 if abs(value.real) < eps else value.real
    im = 0.0 if abs(value.imag) < eps else value.imag
    return complex(re, im)


def _ternary_up() -> ParametricFamily:
    return ParametricFamily(
        name="ternary-up",
        letters=(Z, RationalFunction.constant(0.5), RationalFunction([0.25], [0.0, 1.0])),
        declared_relations=_relations("13~2=21~2", "31~2=23~2"),
        domain_label="1/4 < |z| < 1",
    )


def _ternary_down() -> ParametricFamily:
    return ParametricFamily(
        name="ternary-down",
        letters=(Z, RationalFunction.constant(-0.5), RationalFunction([0.25], [0.0, 1.0])),
        declared_relations=_relations("12~31=22~13", "32~13=22~31"),
        domain_label="1/4 < |z| < 1",
    )


def _binary_b1() -> ParametricFamily:
    return ParametricFamily(
        name="binary-b1",
        letters=(Z, RationalFunction([1.0, 0.0, 1.0])),
        declared_relations=_relations("1111~2=211~2"),
        domain_label="0 < |z| < 1, |1 + z^2| < 1",
    )


def _binary_b2() -> ParametricFamily:
    return ParametricFamily(
        name="binary-b2",
        letters=(Z, Z + 1.0 / (1.0 + Z)),
        declared_relations=_relations("111~2=211~2"),
        domain_label="0 < |z| < 1, |z + 1/(1 + z)| < 1",
    )


def _binary_bandt() -> ParametricFamily:
    return ParametricFamily(
        name="binary-bandt",
        letters=(Z, 1.0 + Z * Z / (Z + 1.0)),
        declared_relations=_relations("111~2=211~2"),
        domain_label="0 < |z| < 1, |1 + z^2/(z + 1)| < 1",
    )


def _binary_b3() -> ParametricFamily:
    return ParametricFamily(
        name="binary-b3",
        letters=(Z, RationalFunction([1.0, 1.0, 1.0])),
        declared_relations=_relations("111~2=21~2"),
        domain_label="0 < |z| < 1, |1 + z + z^2| < 1",
    )


def _plusminus() -> ParametricFamily:
    return ParametricFamily(
        name="plusminus",
        letters=(Z, -Z),
        domain_label="0 < |z| < 1",
    )


def _conjugate() -> ParametricFamily:
    return ParametricFamily(
        name="conjugate",
        letters=(Z, Z),
        conjugate_flags=(False, True),
        domain_label="0 < |z| < 1, z not real",
    )


def ngon(n: int) -> ParametricFamily:
    """Letters z·e^{2πik/n} for k = 1..n."""
    if n < 2:
        raise InputError(f"ngon needs n >= 2, got {n}")
    letters = tuple(
        RationalFunction([0.0, _snap(cmath.exp(2j * math.pi * k / n))]) for k in range(1, n + 1)
    )
    return ParametricFamily(name=f"ngon{n}", letters=letters, domain_label="0 < |z| < 1")


PRESETS: Dict[str, Callable[[], ParametricFamily]] = {
    "ternary-up": _ternary_up,
    "ternary-down": _ternary_down,
    "binary-b1": _binary_b1,
    "binary-b2": _binary_b2,
    "binary-b3": _binary_b3,
    "binary-bandt": _binary_bandt,
    "plusminus": _plusminus,
    "conjugate": _conjugate,
}


def preset_names() -> list:
    return sorted(PRESETS) + ["ngon"]


def preset(name: str, n: Optional[int] = None) -> ParametricFamily:
    """Family from the catalog; ``ngon`` takes its order from ``n`` or a ``ngon5`` style name."""
    key = name.strip().lower()
    if key.startswith("ngon"):
        suffix = key[4:].lstrip(":-")
        if suffix:
            if not suffix.isdigit():
                raise UnknownPreset(f"unknown preset {name!r}")
            n = int(suffix)
        if n is None:
            raise InputError("the ngon preset needs an order n")
        return ngon(n)
    if key not in PRESETS:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {', '.join(preset_names())}")
    return PRESETS[key]()


def rauzy_letter() -> complex:
    """Root of 1 + x + x^2 - x^3 near 0.737·e^{-2.176i}."""
    roots = np.roots([-1.0, 1.0, 1.0, 1.0])
    return complex(min(roots, key=lambda c: c.imag))


DENDRITE_RELATIONS = ("222~3=1~3", "1~3=32~3", "222~3=32~3")


@lru_cache(maxsize=None)
def reference_alphabet(name: str) -> Alphabet:
    """Individual trees used as landmarks: Sierpinski gasket, Rauzy overlap, dendrite."""
    key = name.strip().lower()
    if key == "sierpinski":
        w = complex(-1.0, math.sqrt(3.0)) / 4.0
        return Alphabet((w, 0.5, w.conjugate()))
    if key == "rauzy-binary":
        c = rauzy_letter()
        return Alphabet((c, -c))
    if key == "dendrite":
        rough = Alphabet((0.053 + 0.21j, -0.23 + 0.566j, 0.5 + 0.3j))
        return refine_alphabet(rough, [Relation.parse(t) for t in DENDRITE_RELATIONS[:2]])
    raise UnknownPreset(f"unknown reference alphabet {name!r}; choose from dendrite, rauzy-binary, sierpinski")


def reference_relations(name: str) -> frozenset:
    if name.strip().lower() == "dendrite":
        return _relations(*DENDRITE_RELATIONS)
    return frozenset()
