"""Deformed Stanley-Reisner modules and their quotients by the degree ideal.

A module over the subring generated by the marked rays decomposes into
summands indexed by the box elements of the parameter.  Inside the summand of
alpha, points are monomials m >= 0 supported together with alpha in a common
maximal cone, via p = sum((alpha_i + m_i) v_i); the correspondence is a
bijection because cone coordinates are unique.  Quotients by the ideal
(Z_1..Z_d), Z_j = sum_i g_j(v_i) [v_i], are computed degree by degree in |m|
with exact rational elimination.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .box import BoxElement, alpha_key, box_of_fan, normalize_beta
from .errors import DimensionOvershoot, NoStabilizationWindow, UnboundedDegree
from .fan import StackyFan, minimal_cone, normalized_volume, tangent_member
from .linalg import (
    GaussianRational,
    im_part,
    re_part,
    scalar_from_parts,
    solve_simplicial_coords,
)

Coord = Union[Fraction, GaussianRational]

STOP_WINDOW = 3


@dataclass(frozen=True)
class ModuleSpec:
    """Real rational shift chi, optional shadow direction xi restricting to
    points whose translate admits xi as a tangent direction, and the original
    complex parameter when chi arose by stabilization."""

    fan: StackyFan
    chi: tuple[Fraction, ...]
    xi: Optional[tuple[Fraction, ...]] = None
    complex_beta: Optional[tuple[Coord, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "chi", tuple(Fraction(c) for c in self.chi))
        if self.xi is not None:
            object.__setattr__(self, "xi", tuple(Fraction(c) for c in self.xi))


@dataclass(frozen=True)
class GradedPiece:
    offset: int
    points: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class BasisElement:
    offset: int
    lattice_point: tuple[int, ...]
    alpha: tuple[Coord, ...]
    monomial: tuple[int, ...]
    degree: int


@dataclass(frozen=True, eq=False)
class QuotientAlgebra:
    spec: ModuleSpec
    basis: tuple[BasisElement, ...]
    dim: int
    dmats: tuple[tuple[tuple[Fraction, ...], ...], ...]
    summand_dims: dict = field(repr=False)
    alphas: tuple[BoxElement, ...] = ()
    base_index: dict = field(default_factory=dict, repr=False)


@dataclass(frozen=True)
class TaggedPoint:
    """A module element [point, alpha]; the point is n + beta with exact
    rational or Gaussian-rational coordinates."""

    point: tuple[Coord, ...]
    alpha: tuple[Coord, ...]


def _check_graded(fan: StackyFan):
    if fan.deg is None:
        raise UnboundedDegree("fan carries no degree functional")
    for i in fan.fan_indices():
        if sum(fan.deg[r] * fan.rays[i][r] for r in range(fan.rank)) <= 0:
            raise UnboundedDegree("degree functional is not positive on the support")


def graded_piece(spec: ModuleSpec, m: int) -> GradedPiece:
    """Lattice points n with n + chi in the support, passing the shadow
    filter, of degree m; requires a positive degree functional."""
    fan = spec.fan
    _check_graded(fan)
    deg = fan.deg
    chi = spec.chi
    s = m + sum(deg[r] * chi[r] for r in range(fan.rank))
    if s < 0:
        return GradedPiece(m, ())
    idx = sorted(fan.fan_indices())
    points = []
    ranges = []
    for r in range(fan.rank):
        lo = min(s * fan.rays[i][r] for i in idx)
        hi = max(s * fan.rays[i][r] for i in idx)
        if s == 0:
            lo = hi = Fraction(0)
        ranges.append(range(math.ceil(lo - chi[r]), math.floor(hi - chi[r]) + 1))
    for n in itertools.product(*ranges):
        if sum(deg[r] * n[r] for r in range(fan.rank)) != m:
            continue
        p = tuple(n[r] + chi[r] for r in range(fan.rank))
        if minimal_cone(fan, p) is None:
            continue
        if spec.xi is not None and not tangent_member(fan, p, spec.xi):
            continue
        points.append(tuple(n))
    points.sort()
    return GradedPiece(m, tuple(points))


def module_product(spec_or_fan, nprime: Sequence[int], elem: TaggedPoint):
    """[n'] . [point, alpha]: search for a maximal cone containing n' whose
    index set carries alpha and in which the point sits on the alpha branch
    (coordinates minus alpha are nonnegative integers); None means zero."""
    fan = spec_or_fan.fan if isinstance(spec_or_fan, ModuleSpec) else spec_or_fan
    supp = {i for i, a in enumerate(elem.alpha) if a != 0}
    result = None
    for sigma in fan.max_cones:
        if not supp <= set(sigma):
            continue
        gens = [fan.rays[i] for i in sigma]
        try:
            cn = solve_simplicial_coords(gens, list(nprime))
        except Exception:
            continue
        if any(re_part(c) < 0 or im_part(c) != 0 for c in cn):
            continue
        c_in = solve_simplicial_coords(gens, list(elem.point))
        ok = True
        for pos, i in enumerate(sigma):
            dre = re_part(c_in[pos]) - re_part(elem.alpha[i])
            dim_ = im_part(c_in[pos]) - im_part(elem.alpha[i])
            if dim_ != 0 or dre.denominator != 1 or dre < 0:
                ok = False
                break
        if not ok:
            continue
        alpha_out = [Fraction(0)] * fan.k
        for pos, i in enumerate(sigma):
            val_re = re_part(c_in[pos]) + re_part(cn[pos])
            val_im = im_part(c_in[pos])
            f = val_re.numerator // val_re.denominator
            alpha_out[i] = scalar_from_parts(val_re - f, val_im)
        out_point = tuple(
            scalar_from_parts(
                re_part(elem.point[r]) + nprime[r], im_part(elem.point[r])
            )
            for r in range(fan.rank)
        )
        candidate = TaggedPoint(out_point, tuple(alpha_out))
        if result is None:
            result = candidate
        elif result != candidate:
            raise RuntimeError("internal: product depends on the witness cone")
    return result


def _compositions(total: int, slots: int):
    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


class _Summand:
    """Degree-by-degree state of one alpha summand."""

    def __init__(self, spec: ModuleSpec, alpha_elem: BoxElement):
        self.spec = spec
        self.fan = spec.fan
        self.elem = alpha_elem
        self.witnesses = alpha_elem.witness_cones
        self.pieces: dict[int, list[tuple[int, ...]]] = {}
        self.lattice: dict[int, list[tuple[int, ...]]] = {}
        self.cols: dict[int, dict[tuple[int, ...], int]] = {}
        self.ech: dict[int, list[tuple[int, list[Fraction]]]] = {}
        self.quot: dict[int, list[int]] = {}

    def _monomials(self, t: int):
        fan = self.fan
        found = {}
        for sigma in self.witnesses:
            for comp in _compositions(t, len(sigma)):
                m = [0] * fan.k
                for pos, i in enumerate(sigma):
                    m[i] = comp[pos]
                m = tuple(m)
                if m in found:
                    continue
                n = tuple(
                    self.elem.lattice_point[r]
                    + sum(m[i] * fan.rays[i][r] for i in range(fan.k))
                    for r in range(fan.rank)
                )
                if self.spec.xi is not None:
                    p = tuple(n[r] + self.spec.chi[r] for r in range(fan.rank))
                    if not tangent_member(fan, p, self.spec.xi):
                        continue
                found[m] = n
        mons = sorted(found, key=lambda m: (found[m], m))
        return mons, [found[m] for m in mons]

    def _admissible(self, m: tuple[int, ...]) -> bool:
        supp = {i for i in range(self.fan.k) if m[i] > 0}
        return any(supp <= set(sigma) for sigma in self.witnesses)

    def extend(self, t: int) -> int:
        fan = self.fan
        mons, lattice = self._monomials(t)
        self.pieces[t] = mons
        self.lattice[t] = lattice
        col = {m: c for c, m in enumerate(mons)}
        self.cols[t] = col
        rows = []
        ray_idx = sorted(fan.fan_indices())
        for mprev in self.pieces.get(t - 1, []):
            for j in range(fan.rank):
                vec = [Fraction(0)] * len(mons)
                nonzero = False
                for i in ray_idx:
                    coeff = fan.rays[i][j]
                    if coeff == 0:
                        continue
                    m2 = tuple(
                        mprev[x] + (1 if x == i else 0) for x in range(fan.k)
                    )
                    if not self._admissible(m2):
                        continue
                    c = col.get(m2)
                    if c is None:
                        raise RuntimeError(
                            "internal: shadow filter is not closed under the ray action"
                        )
                    vec[c] += coeff
                    nonzero = True
                if nonzero:
                    rows.append(vec)
        ech = _rref(rows, len(mons))
        self.ech[t] = ech
        pivots = {pc for pc, _ in ech}
        self.quot[t] = [c for c in range(len(mons)) if c not in pivots]
        return len(self.quot[t])

    def reduce(self, t: int, vec: list[Fraction]) -> list[Fraction]:
        for pc, row in self.ech[t]:
            if vec[pc] != 0:
                f = vec[pc]
                vec = [x - f * y for x, y in zip(vec, row)]
        return [vec[c] for c in self.quot[t]]


def _rref(rows, ncols):
    ech: list[tuple[int, list[Fraction]]] = []
    for r in rows:
        v = list(r)
        for pc, er in ech:
            if v[pc] != 0:
                f = v[pc]
                v = [x - f * y for x, y in zip(v, er)]
        pc = next((c for c in range(ncols) if v[c] != 0), None)
        if pc is None:
            continue
        inv = Fraction(1) / v[pc]
        v = [x * inv for x in v]
        for idx, (pc2, er) in enumerate(ech):
            if er[pc] != 0:
                f = er[pc]
                ech[idx] = (pc2, [x - f * y for x, y in zip(er, v)])
        ech.append((pc, v))
    ech.sort(key=lambda pr: pr[0])
    return ech


def build_quotient(spec: ModuleSpec) -> QuotientAlgebra:
    """Quotient of the chi-shifted module by (Z_1..Z_d), degree by degree,
    stopping once the cumulative dimension reaches the normalized volume and
    three further degrees contribute nothing."""
    fan = spec.fan
    vol = normalized_volume(fan)
    alphas = box_of_fan(fan, spec.chi)
    summands = [_Summand(spec, a) for a in alphas]
    cap = 10 * fan.rank + 10
    cum = 0
    streak = 0
    t = 0
    while True:
        contrib = sum(s.extend(t) for s in summands)
        cum += contrib
        if cum > vol:
            raise DimensionOvershoot(
                f"cumulative dimension {cum} exceeds the normalized volume {vol}"
            )
        if cum == vol:
            streak = streak + 1 if contrib == 0 else 0
            if streak >= STOP_WINDOW:
                break
        if t >= cap:
            raise NoStabilizationWindow(
                f"no stable window below the offset cap {cap} (reached {cum} of {vol})"
            )
        t += 1
    top = t - STOP_WINDOW

    basis: list[BasisElement] = []
    index: dict[tuple[int, int, int], int] = {}
    base_index: dict[tuple, int] = {}
    summand_dims: dict[tuple, int] = {}
    for s_i, s in enumerate(summands):
        akey = alpha_key(s.elem.alpha)
        count = 0
        for deg_t in range(top + 1):
            for c in s.quot.get(deg_t, []):
                m = s.pieces[deg_t][c]
                n = s.lattice[deg_t][c]
                if fan.deg is not None:
                    offset = sum(fan.deg[r] * n[r] for r in range(fan.rank))
                else:
                    offset = deg_t
                index[(s_i, deg_t, c)] = len(basis)
                if deg_t == 0 and all(x == 0 for x in m):
                    base_index[akey] = len(basis)
                basis.append(
                    BasisElement(offset, n, s.elem.alpha, m, deg_t)
                )
                count += 1
        summand_dims[akey] = count
    dim = len(basis)

    dmats = []
    ray_idx = set(fan.fan_indices())
    for i in range(fan.k):
        mat = [[Fraction(0)] * dim for _ in range(dim)]
        if i in ray_idx:
            for (s_i, deg_t, c), g_idx in index.items():
                s = summands[s_i]
                m = s.pieces[deg_t][c]
                m2 = tuple(m[x] + (1 if x == i else 0) for x in range(fan.k))
                if not s._admissible(m2):
                    continue
                t2 = deg_t + 1
                if t2 not in s.pieces:
                    continue
                c2 = s.cols[t2].get(m2)
                if c2 is None:
                    raise RuntimeError(
                        "internal: shadow filter is not closed under the ray action"
                    )
                vec = [Fraction(0)] * len(s.pieces[t2])
                vec[c2] = Fraction(1)
                coords = s.reduce(t2, vec)
                for local, value in enumerate(coords):
                    if value != 0:
                        tgt = index[(s_i, t2, s.quot[t2][local])]
                        mat[tgt][g_idx] = value
        dmats.append(tuple(tuple(row) for row in mat))

    return QuotientAlgebra(
        spec=spec,
        basis=tuple(basis),
        dim=dim,
        dmats=tuple(dmats),
        summand_dims=summand_dims,
        alphas=alphas,
        base_index=base_index,
    )


def _pair_elements(fan: StackyFan, src: BoxElement, max_offset: int):
    """Module elements [point, alpha] of the alpha summand with |m| <= max_offset."""
    out = []
    seen = set()
    for sigma in src.witness_cones:
        for t in range(max_offset + 1):
            for comp in _compositions(t, len(sigma)):
                m = [0] * fan.k
                for pos, i in enumerate(sigma):
                    m[i] = comp[pos]
                m = tuple(m)
                if m in seen:
                    continue
                seen.add(m)
                point = tuple(
                    scalar_from_parts(
                        sum(
                            (re_part(src.alpha[i]) + m[i]) * fan.rays[i][r]
                            for i in range(fan.k)
                        ),
                        sum(im_part(src.alpha[i]) * fan.rays[i][r] for i in range(fan.k)),
                    )
                    for r in range(fan.rank)
                )
                out.append(TaggedPoint(point, src.alpha))
    return out


def _multipliers(fan: StackyFan, max_offset: int):
    pts = set()
    for sigma in fan.max_cones:
        for t in range(max_offset + 1):
            for comp in _compositions(t, len(sigma)):
                n = tuple(
                    sum(comp[pos] * fan.rays[i][r] for pos, i in enumerate(sigma))
                    for r in range(fan.rank)
                )
                pts.add(n)
    return sorted(pts)


def verify_def2_isomorphism(fan: StackyFan, beta, correspondence, max_offset: int) -> bool:
    """Check that the correspondence intertwines the two module products on
    all pairs with monomial part of size <= max_offset against all multiplier
    points generated by the rays up to that size.

    An element [point, alpha] maps to the pair at the stabilized parameter
    with the same monomial part; the lattice point shifts by the constant
    recorded in the correspondence for that summand (nonzero exactly when a
    coordinate has real part zero and negative imaginary part).
    """
    b = normalize_beta(fan, beta)
    amap = {}
    for src, tgt, _ in correspondence.triples:
        shift = tuple(
            t - s for s, t in zip(src.lattice_point, tgt.lattice_point)
        )
        amap[alpha_key(src.alpha)] = (tgt.alpha, shift)
    beta_delta = correspondence.beta_delta

    def phi(elem: TaggedPoint):
        key = alpha_key(elem.alpha)
        if key not in amap:
            raise RuntimeError("internal: product left the box set")
        target_alpha, shift = amap[key]
        n = tuple(
            re_part(elem.point[r]) - re_part(b[r]) for r in range(fan.rank)
        )
        point = tuple(n[r] + shift[r] + beta_delta[r] for r in range(fan.rank))
        return TaggedPoint(point, target_alpha)

    elements = []
    for src, _, _ in correspondence.triples:
        elements.extend(_pair_elements(fan, src, max_offset))
    for nprime in _multipliers(fan, max_offset):
        for x in elements:
            lhs = module_product(fan, nprime, x)
            rhs = module_product(fan, nprime, phi(x))
            if (lhs is None) != (rhs is None):
                return False
            if lhs is not None and phi(lhs) != rhs:
                return False
    return True
