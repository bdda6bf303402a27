"""Spectrum of the deformed Grothendieck ring attached to a stacky fan.

The ring is Artinian and its maximal ideals correspond to the reduced
exponent vectors alpha of the box set through y_i = exp(2*pi*i*alpha_i).
Point multiplicities are read off the graded quotient's summand dimensions,
transported through the small-parameter correspondence when the parameter
has an imaginary part.  Collisions of per-cone branches onto one spectrum
point mark the non-semisimple locus; each colliding pair carries the integer
offset between the two unreduced solutions as an exact witness.
"""

import cmath
import itertools
from dataclasses import dataclass
from typing import Sequence

from .box import (
    Branch,
    CollisionClass,
    Coord,
    alpha_key,
    collisions,
    normalize_beta,
    stabilize,
)
from .fan import StackyFan
from .linalg import im_part, re_part
from .quotient import ModuleSpec, build_quotient


@dataclass(frozen=True)
class KPoint:
    """One point of the spectrum with its collision class and multiplicity."""

    y: tuple[complex, ...]
    alpha_class: CollisionClass
    multiplicity: int


@dataclass(frozen=True)
class WallRecord:
    """Two branches landing on the same spectrum point.

    difference is second's unreduced solution minus first's, an integer
    vector; both reduce to the shared alpha.
    """

    alpha: tuple[Coord, ...]
    first: Branch
    second: Branch
    difference: tuple[int, ...]


def unit_phase(a: Coord) -> complex:
    """exp(2*pi*i*a), exactly 1.0 when a is exactly zero."""
    if a == 0:
        return complex(1.0)
    z = complex(float(re_part(a)), float(im_part(a)))
    return cmath.exp(2j * cmath.pi * z)


def spectrum(fan: StackyFan, beta: Sequence) -> tuple[KPoint, ...]:
    """All spectrum points in lexicographic exponent order.

    The multiplicity of a point is the dimension of the graded quotient
    summand at the stabilized real parameter paired with its exponent
    vector, so the multiplicities always sum to the normalized volume.
    """
    b = normalize_beta(fan, beta)
    corr = stabilize(fan, b)
    has_im = any(im_part(x) != 0 for x in b)
    quotient = build_quotient(
        ModuleSpec(fan, corr.beta_delta, complex_beta=b if has_im else None)
    )
    amap = {alpha_key(src.alpha): alpha_key(tgt.alpha) for src, tgt, _ in corr.triples}
    points = []
    for cls in collisions(fan, b):
        mult = quotient.summand_dims[amap[alpha_key(cls.alpha)]]
        y = tuple(unit_phase(a) for a in cls.alpha)
        points.append(KPoint(y, cls, mult))
    return tuple(points)


def wall_report(fan: StackyFan, beta: Sequence) -> tuple[WallRecord, ...]:
    """One record per colliding branch pair; empty exactly off the walls."""
    b = normalize_beta(fan, beta)
    records = []
    for cls in collisions(fan, b):
        brs = cls.branches
        for i, j in itertools.combinations(range(len(brs)), 2):
            diff = tuple(x - y for x, y in zip(brs[j].floors, brs[i].floors))
            records.append(WallRecord(cls.alpha, brs[i], brs[j], diff))
    return tuple(records)


def is_semisimple(fan: StackyFan, beta: Sequence) -> bool:
    return all(p.multiplicity == 1 for p in spectrum(fan, beta))


def minimal_non_faces(fan: StackyFan) -> tuple[tuple[int, ...], ...]:
    """Inclusion-minimal index sets inside the fan that no maximal cone contains."""
    idx = sorted(fan.fan_indices())
    faces = [set(mc) for mc in fan.max_cones]
    out: list[tuple[int, ...]] = []
    for size in range(1, len(idx) + 1):
        for sub in itertools.combinations(idx, size):
            ss = set(sub)
            if any(ss <= f for f in faces):
                continue
            if any(set(m) <= ss for m in out):
                continue
            out.append(sub)
    return tuple(out)
