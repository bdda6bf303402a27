"""Box sets of simplicial stacky fans with rational or complex parameters.

A box element for a full-dimensional cone records the unique exponent vector
alpha with real parts in [0,1) that writes a lattice translate of the
parameter beta in the cone's marked generators.  The module also provides the
delta-stabilization replacing a complex beta by the nearby real parameter
Re(beta) + delta*Im(beta), and the collision partition of the per-cone
branches.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import NoStabilization, NotFullDimensional
from .fan import ConeRef, StackyFan, minimal_cone
from .linalg import (
    GaussianRational,
    as_gaussian,
    gaussian_floor_reduce,
    im_part,
    mat_inverse,
    mat_vec,
    re_part,
    scalar_from_parts,
    smith_normal_form,
    solve_simplicial_coords,
)

Coord = Union[Fraction, GaussianRational]


@dataclass(frozen=True)
class BoxElement:
    """One solution alpha, its lattice point n with sum(alpha_i v_i) = n + beta,
    the indices carrying nonzero entries, and every maximal cone containing them."""

    alpha: tuple[Coord, ...]
    lattice_point: tuple[int, ...]
    support: tuple[int, ...]
    witness_cones: tuple[ConeRef, ...]


@dataclass(frozen=True)
class Branch:
    """A residue class of one maximal cone; stable label across parameter values.

    floors records the integer parts dropped while reducing the raw cone
    coordinates, zero outside the cone, so the unreduced solution is
    element.alpha + floors coordinatewise.
    """

    cone: ConeRef
    residue: tuple[int, ...]
    floors: tuple[int, ...]
    element: BoxElement


@dataclass(frozen=True)
class CollisionClass:
    alpha: tuple[Coord, ...]
    branches: tuple[Branch, ...]
    # offsets of each branch's unreduced solution against the first branch;
    # integer vectors since the reduced exponents agree
    differences: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class DeltaCorrespondence:
    """Pairing of the box sets at beta and at beta_delta = Re(beta) + delta*Im(beta).

    Each triple is (element at beta, element at beta_delta, point sum((alpha_delta)_i v_i)).
    """

    delta: Fraction
    beta: tuple[Coord, ...]
    beta_delta: tuple[Fraction, ...]
    triples: tuple[tuple[BoxElement, BoxElement, tuple[Fraction, ...]], ...]


def alpha_key(alpha: Sequence[Coord]) -> tuple:
    return tuple((re_part(a), im_part(a)) for a in alpha)


def normalize_beta(fan: StackyFan, beta: Sequence) -> tuple[Coord, ...]:
    if len(beta) != fan.rank:
        raise ValueError(f"beta must have {fan.rank} coordinates, got {len(beta)}")
    out = []
    for b in beta:
        g = as_gaussian(b)
        out.append(scalar_from_parts(g.re, g.im))
    return tuple(out)


def _floor_reduce(c: Coord) -> tuple[Coord, int]:
    if isinstance(c, GaussianRational):
        reduced, f = gaussian_floor_reduce(c)
        return scalar_from_parts(reduced.re, reduced.im), f
    f = math.floor(c)
    return c - f, f


def _witnesses(fan: StackyFan, support: tuple[int, ...], cone: ConeRef) -> tuple[ConeRef, ...]:
    wits = tuple(mc for mc in fan.max_cones if set(support) <= set(mc))
    return wits if wits else (cone,)


def _cone_branches(fan, cone, beta):
    """(residue, floors, BoxElement) triples in residue enumeration order."""
    d = fan.rank
    cone = tuple(cone)
    if len(cone) != d:
        raise NotFullDimensional(f"cone {cone} is not full-dimensional in rank {d}")
    gens = [fan.rays[i] for i in cone]
    v = [[gens[j][r] for j in range(d)] for r in range(d)]
    dmat, s, _t = smith_normal_form(v)
    diag = [dmat[i][i] for i in range(d)]
    if any(x == 0 for x in diag):
        raise NotFullDimensional(f"generators of cone {cone} are linearly dependent")
    s_inv = [[int(x) for x in row] for row in mat_inverse(s)]
    out = []
    for residue in itertools.product(*[range(x) for x in diag]):
        n0 = [int(x) for x in mat_vec(s_inv, residue)]
        coords = solve_simplicial_coords(gens, [n0[r] + beta[r] for r in range(d)])
        alpha = [Fraction(0)] * fan.k
        floors = []
        for pos, i in enumerate(cone):
            reduced, f = _floor_reduce(coords[pos])
            alpha[i] = scalar_from_parts(re_part(reduced), im_part(reduced))
            floors.append(f)
        point = tuple(
            n0[r] - sum(floors[pos] * gens[pos][r] for pos in range(d)) for r in range(d)
        )
        support = tuple(i for i in range(fan.k) if alpha[i] != 0)
        elem = BoxElement(tuple(alpha), point, support, _witnesses(fan, support, cone))
        padded = [0] * fan.k
        for pos, i in enumerate(cone):
            padded[i] = floors[pos]
        out.append((residue, tuple(padded), elem))
    return out


def box_of_cone(fan: StackyFan, cone, beta) -> tuple[BoxElement, ...]:
    """All alpha with Re in [0,1), supported in the cone, solving a lattice
    translate of beta; exactly |det| of them."""
    b = normalize_beta(fan, beta)
    elems = [e for _, _, e in _cone_branches(fan, cone, b)]
    return tuple(sorted(elems, key=lambda e: alpha_key(e.alpha)))


def box_of_fan(fan: StackyFan, beta) -> tuple[BoxElement, ...]:
    """Union over the maximal cones, deduplicated by exact alpha equality."""
    b = normalize_beta(fan, beta)
    seen: dict[tuple, BoxElement] = {}
    for mc in fan.max_cones:
        for _, _, e in _cone_branches(fan, mc, b):
            key = alpha_key(e.alpha)
            prior = seen.get(key)
            if prior is None:
                seen[key] = e
            elif prior.lattice_point != e.lattice_point:
                raise RuntimeError("internal: equal alpha with distinct lattice points")
    return tuple(seen[k] for k in sorted(seen))


def collisions(fan: StackyFan, beta) -> tuple[CollisionClass, ...]:
    """Partition of the per-cone branches by equal reduced exponent vectors."""
    b = normalize_beta(fan, beta)
    groups: dict[tuple, list[Branch]] = {}
    for mc in fan.max_cones:
        for residue, floors, e in _cone_branches(fan, mc, b):
            groups.setdefault(alpha_key(e.alpha), []).append(Branch(mc, residue, floors, e))
    classes = []
    for key in sorted(groups):
        branches = tuple(sorted(groups[key], key=lambda br: (br.cone, br.residue)))
        base = branches[0].floors
        diffs = tuple(
            tuple(x - y for x, y in zip(br.floors, base)) for br in branches
        )
        classes.append(CollisionClass(branches[0].element.alpha, branches, diffs))
    return tuple(classes)


def _alpha_delta(alpha: Sequence[Coord], delta: Fraction):
    """Per-coordinate fractional parts of Re + delta*Im, with the floors."""
    values, floors = [], []
    for a in alpha:
        val = re_part(a) + delta * im_part(a)
        f = math.floor(val)
        values.append(val - f)
        floors.append(f)
    return tuple(values), tuple(floors)


def _signature(fan: StackyFan, source, delta: Fraction):
    per = []
    vecs = []
    for e in source:
        values, floors = _alpha_delta(e.alpha, delta)
        support = tuple(i for i, v in enumerate(values) if v != 0)
        per.append((floors, support, _witnesses(fan, support, e.witness_cones[0])))
        vecs.append(values)
    return tuple(per), len(set(vecs)) == len(vecs)


def correspondence_at(fan: StackyFan, beta, delta: Fraction) -> DeltaCorrespondence:
    """Build the correspondence at a given delta without running the halving search."""
    b = normalize_beta(fan, beta)
    source = box_of_fan(fan, b)
    beta_delta = tuple(re_part(x) + delta * im_part(x) for x in b)
    target = box_of_fan(fan, beta_delta)
    index = {alpha_key(e.alpha): i for i, e in enumerate(target)}
    used = set()
    triples = []
    for e in source:
        values, _ = _alpha_delta(e.alpha, delta)
        j = index.get(tuple((v, Fraction(0)) for v in values))
        if j is None or j in used:
            raise RuntimeError("internal: stabilized elements do not biject")
        used.add(j)
        te = target[j]
        if te.support != e.support:
            raise RuntimeError("internal: support changed under stabilization")
        point = tuple(
            sum((values[i] * fan.rays[i][r] for i in range(fan.k)), start=Fraction(0))
            for r in range(fan.rank)
        )
        if minimal_cone(fan, point) != e.support:
            raise RuntimeError("internal: point support differs from exponent support")
        triples.append((e, te, point))
    if len(used) != len(target):
        raise RuntimeError("internal: stabilized elements do not biject")
    return DeltaCorrespondence(delta, b, beta_delta, tuple(triples))


def stabilize(fan: StackyFan, beta) -> DeltaCorrespondence:
    """Find a certified small delta by halving from 1/16 until the combinatorial
    data (floors, supports, witness sets, injectivity) agrees on two consecutive
    levels; the first level of the agreeing pair is returned."""
    b = normalize_beta(fan, beta)
    source = box_of_fan(fan, b)
    previous = None
    delta = Fraction(1, 16)
    for _ in range(41):
        sig = _signature(fan, source, delta)
        if previous is not None and previous[1] == sig:
            return correspondence_at(fan, b, previous[0])
        previous = (delta, sig)
        delta = delta / 2
    raise NoStabilization("combinatorial data did not settle within 40 halvings")
