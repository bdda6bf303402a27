"""Simplicial stacky fans: validation, cone membership, triangulation.

A stacky fan is a rational simplicial fan in Z^d together with a marked
lattice vector on each ray (markers need not be primitive).  Marked vectors
that appear in no cone are allowed; they only participate through the index
set of the configuration.  Cones are referenced by sorted 0-based tuples of
marker indices; JSON I/O is 1-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .errors import (
    DegenerateHeights,
    DependentGenerators,
    NotFullDimensional,
    PointOutsideSupport,
)
from .linalg import (
    GaussianRational,
    as_gaussian,
    det_rational,
    in_span_coords,
    lattice_generates,
    solve_integer,
    solve_simplicial_coords,
)

ConeRef = tuple[int, ...]


@dataclass(frozen=True)
class StackyFan:
    rank: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[ConeRef, ...]
    deg: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in v) for v in self.rays))
        object.__setattr__(
            self, "max_cones", tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
        )
        if self.deg is not None:
            object.__setattr__(self, "deg", tuple(int(x) for x in self.deg))

    @property
    def k(self) -> int:
        return len(self.rays)

    def fan_indices(self) -> frozenset[int]:
        """Indices of markers that generate rays of the fan."""
        out = set()
        for c in self.max_cones:
            out.update(c)
        return frozenset(out)

    def gens(self, cone: Sequence[int]) -> list[tuple[int, ...]]:
        return [self.rays[i] for i in cone]

    def deg_of(self, v: Sequence) -> Fraction:
        if self.deg is None:
            raise ValueError("fan has no degree functional")
        return sum((Fraction(x) * d for x, d in zip(v, self.deg)), start=Fraction(0))


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[str, ...]
    gkz_eligible: bool
    gkz_notes: tuple[str, ...]
    volume: Optional[int]
    deg: Optional[tuple[int, ...]] = None


def primitive_direction(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector on the ray through v, preserving orientation."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def _cone_coords(fan: StackyFan, cone: Sequence[int], p: Sequence):
    """Coordinates of p in the cone's generators, or None if not in the span."""
    return in_span_coords(fan.gens(cone), p)


def cone_contains(fan: StackyFan, cone: Sequence[int], p: Sequence) -> bool:
    coords = _cone_coords(fan, cone, p)
    if coords is None:
        return False
    return all(c.im == 0 and c.re >= 0 if isinstance(c, GaussianRational) else c >= 0 for c in coords)


def minimal_cone(fan: StackyFan, p: Sequence, use_real_part: bool = False):
    """Smallest face of the fan containing p, as a ConeRef, or None.

    For points with Gaussian-rational entries the test applies to the real
    part when use_real_part is set; otherwise complex input is rejected.
    """
    pt = list(p)
    if any(isinstance(x, GaussianRational) for x in pt):
        if not all(as_gaussian(x).im == 0 for x in pt) and not use_real_part:
            raise ValueError("complex point requires use_real_part")
        pt = [as_gaussian(x).re for x in pt]
    for cone in fan.max_cones:
        coords = _cone_coords(fan, cone, pt)
        if coords is None:
            continue
        if all(c >= 0 for c in coords):
            return tuple(i for i, c in zip(cone, coords) if c != 0)
    return None


def tangent_member(fan: StackyFan, p: Sequence, xi: Sequence) -> bool:
    """True iff p + eps*xi stays in the support of the fan for small eps > 0.

    Checked cone by cone: some maximal cone containing p must have all of its
    facet inequalities that are binding at p nonnegative on xi.  Raises
    PointOutsideSupport when p is in no cone.
    """
    in_support = False
    for cone in fan.max_cones:
        pc = _cone_coords(fan, cone, p)
        if pc is None or any(c < 0 for c in pc):
            continue
        in_support = True
        xc = _cone_coords(fan, cone, xi)
        if xc is None:
            continue
        if all(pc[i] > 0 or xc[i] >= 0 for i in range(len(pc))):
            return True
    if not in_support:
        raise PointOutsideSupport(f"point {tuple(p)} is outside the fan support")
    return False


def normalized_volume(fan: StackyFan) -> int:
    """Sum of |det| of generator matrices over maximal cones."""
    total = 0
    for cone in fan.max_cones:
        if len(cone) != fan.rank:
            raise NotFullDimensional(f"cone {cone} is not full-dimensional")
        m = [[fan.rays[i][r] for i in cone] for r in range(fan.rank)]
        d = det_rational(m)
        if d == 0:
            raise NotFullDimensional(f"cone {cone} has dependent generators")
        total += abs(int(d))
    return total


def is_complete(fan: StackyFan) -> bool:
    """True iff every facet of a maximal cone is shared by exactly two cones."""
    if not fan.max_cones:
        return False
    counts: dict[ConeRef, int] = {}
    for cone in fan.max_cones:
        if len(cone) != fan.rank:
            return False
        for i in cone:
            facet = tuple(j for j in cone if j != i)
            counts[facet] = counts.get(facet, 0) + 1
    return all(v == 2 for v in counts.values())


# ---------------------------------------------------------------------------
# fan axioms


def _intersection_rays(fan: StackyFan, c1: ConeRef, c2: ConeRef) -> set[tuple[int, ...]]:
    """Primitive directions of the extreme rays of cone(c1) ∩ cone(c2)."""
    g1 = fan.gens(c1)
    g2 = fan.gens(c2)
    d = fan.rank
    # span intersection: solve V1*a - V2*b = 0
    cols = len(g1) + len(g2)
    rows = [
        [Fraction(g1[j][r]) for j in range(len(g1))]
        + [Fraction(-g2[j][r]) for j in range(len(g2))]
        for r in range(d)
    ]
    kernel = _rational_kernel(rows, cols)
    # basis of L = span(c1) ∩ span(c2), as vectors V1*a
    cand = []
    for vec in kernel:
        x = tuple(
            sum((vec[j] * g1[j][r] for j in range(len(g1))), start=Fraction(0))
            for r in range(d)
        )
        cand.append(x)
    basis = _independent_subset(cand)
    m = len(basis)
    if m == 0:
        return set()
    p_rows: list[list[Fraction]] = []
    for gens in (g1, g2):
        coeff_cols = [solve_simplicial_coords(gens, basis[col]) for col in range(m)]
        for i in range(len(gens)):
            p_rows.append([coeff_cols[col][i] for col in range(m)])
    rays_out: set[tuple[int, ...]] = set()

    def admit(t):
        vals = [sum((row[j] * t[j] for j in range(m)), start=Fraction(0)) for row in p_rows]
        return all(v >= 0 for v in vals)

    if m == 1:
        for t in ((Fraction(1),), (Fraction(-1),)):
            if admit(t):
                x = tuple(basis[0][r] * t[0] for r in range(d))
                if any(x):
                    rays_out.add(primitive_direction(x))
        return rays_out
    for subset in itertools.combinations(range(len(p_rows)), m - 1):
        sub = [p_rows[i] for i in subset]
        ker = _rational_kernel(sub, m)
        if len(ker) != 1:
            continue
        t = ker[0]
        for cand_t in (t, tuple(-x for x in t)):
            if admit(cand_t):
                x = tuple(
                    sum((basis[j][r] * cand_t[j] for j in range(m)), start=Fraction(0))
                    for r in range(d)
                )
                if any(x):
                    rays_out.add(primitive_direction(x))
                break
    return rays_out


def _rational_kernel(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of the kernel of a rational matrix given by rows."""
    a = [list(map(Fraction, row)) for row in rows]
    nrows = len(a)
    pivots = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = Fraction(1) / a[row][col]
        a[row] = [x * inv for x in a[row]]
        for r in range(nrows):
            if r != row and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -a[i][f]
        basis.append(tuple(vec))
    return basis


def _independent_subset(vectors: list[tuple[Fraction, ...]]) -> list[tuple[Fraction, ...]]:
    basis: list[tuple[Fraction, ...]] = []
    reduced: list[list[Fraction]] = []
    for v in vectors:
        w = list(v)
        for r in reduced:
            piv = next((j for j, x in enumerate(r) if x != 0), None)
            if piv is not None and w[piv] != 0:
                f = w[piv] / r[piv]
                w = [x - f * y for x, y in zip(w, r)]
        if any(w):
            basis.append(v)
            reduced.append(w)
    return basis


def validate(fan: StackyFan) -> ValidationReport:
    """Check the fan axioms and GKZ eligibility.

    Fan axioms: markers nonzero and distinct, every listed maximal cone
    simplicial, and each pairwise intersection of maximal cones equal to the
    cone on the shared marker subset.  GKZ eligibility additionally needs an
    integral degree functional taking value 1 on every marker, markers that
    generate Z^d, full-dimensional cones, and support covering the cone over
    the marker polytope (checked by volume accounting against an auxiliary
    regular triangulation).
    """
    violations: list[str] = []
    d = fan.rank
    k = fan.k
    if d < 1:
        violations.append("rank must be positive")
    if k == 0:
        violations.append("no markers")
    for i, v in enumerate(fan.rays):
        if len(v) != d:
            violations.append(f"marker {i + 1} has wrong length")
        elif not any(v):
            violations.append(f"marker {i + 1} is zero")
    if len(set(fan.rays)) != k:
        violations.append("duplicate markers")
    if not fan.max_cones:
        violations.append("no maximal cones")
    for cone in fan.max_cones:
        if any(i < 0 or i >= k for i in cone):
            violations.append(f"cone {tuple(i + 1 for i in cone)} has out-of-range indices")
            continue
        if len(set(cone)) != len(cone):
            violations.append(f"cone {tuple(i + 1 for i in cone)} repeats an index")
            continue
        gens = fan.gens(cone)
        try:
            solve_simplicial_coords(gens, [Fraction(0)] * d)
        except DependentGenerators:
            violations.append(f"cone {tuple(i + 1 for i in cone)} is not simplicial")
    if len(set(fan.max_cones)) != len(fan.max_cones):
        violations.append("duplicate maximal cones")
    if fan.deg is not None and not violations:
        for i, v in enumerate(fan.rays):
            if fan.deg_of(v) != 1:
                violations.append(f"deg is not 1 on marker {i + 1}")
                break
    if not violations:
        for c1, c2 in itertools.combinations(fan.max_cones, 2):
            shared = sorted(set(c1) & set(c2))
            expected = {primitive_direction(fan.rays[j]) for j in shared}
            got = _intersection_rays(fan, c1, c2)
            if got != expected:
                violations.append(
                    f"cones {tuple(i + 1 for i in c1)} and {tuple(i + 1 for i in c2)} "
                    "do not intersect in a common face"
                )
    valid = not violations
    volume = None
    if valid:
        try:
            volume = normalized_volume(fan)
        except NotFullDimensional:
            volume = None
    gkz_notes: list[str] = []
    deg = fan.deg
    if not valid:
        gkz_notes.append("fan axioms fail")
    else:
        if deg is None:
            deg = infer_deg(fan.rays)
            if deg is None:
                gkz_notes.append("no integral degree functional equal to 1 on all markers")
        if not lattice_generates(fan.rays):
            gkz_notes.append("markers do not generate the lattice")
        if volume is None:
            gkz_notes.append("maximal cones are not all full-dimensional")
        if deg is not None and volume is not None:
            hull_vol = _configuration_volume(fan.rays)
            if hull_vol is None:
                gkz_notes.append("could not triangulate the marker configuration")
            elif hull_vol != volume:
                gkz_notes.append(
                    f"support volume {volume} differs from marker hull volume {hull_vol}"
                )
    gkz_eligible = valid and not gkz_notes
    return ValidationReport(
        valid=valid,
        violations=tuple(violations),
        gkz_eligible=gkz_eligible,
        gkz_notes=tuple(gkz_notes),
        volume=volume,
        deg=deg if gkz_eligible or fan.deg is not None else None,
    )


def infer_deg(rays: Sequence[Sequence[int]]) -> Optional[tuple[int, ...]]:
    """Integral functional with value 1 on every marker, or None."""
    d = len(rays[0])
    k = len(rays)
    cols = [tuple(v[j] for v in rays) for j in range(d)]
    g = solve_integer(cols, tuple([1] * k))
    return tuple(g) if g is not None else None


def _configuration_volume(points: Sequence[Sequence[int]]) -> Optional[int]:
    """Normalized volume of the cone over the marker polytope, via an
    auxiliary regular triangulation with deterministic generic heights."""
    k = len(points)
    for attempt in range(6):
        heights = [Fraction((i + 1) ** (attempt + 2) + attempt * i, 1 + attempt) for i in range(k)]
        try:
            aux = triangulate_from_heights(points, heights)
        except DegenerateHeights:
            continue
        return normalized_volume(aux)
    return None


def triangulate_from_heights(
    points: Sequence[Sequence[int]], heights: Sequence
) -> StackyFan:
    """Stacky fan of the regular triangulation induced by a height vector.

    Cells are the d-subsets S whose height-interpolating functional w
    (w . v_i = h_i on S) satisfies w . v_j <= h_j everywhere, with equality
    exactly on S.  An equality outside S means a non-simplicial lower facet
    and raises DegenerateHeights.
    """
    pts = [tuple(int(x) for x in p) for p in points]
    d = len(pts[0])
    hs = [Fraction(h) for h in heights]
    if len(hs) != len(pts):
        raise ValueError("heights and points must have equal length")
    cells: set[ConeRef] = set()
    for subset in itertools.combinations(range(len(pts)), d):
        # columns of the subset's point matrix; solve w . v_i = h_i on subset
        cols = [tuple(pts[i][r] for i in subset) for r in range(d)]
        if det_rational(cols) == 0:
            continue
        w = solve_simplicial_coords(cols, [hs[i] for i in subset])
        vals = [sum((Fraction(x) * wi for x, wi in zip(p, w)), start=Fraction(0)) for p in pts]
        if any(vals[j] > hs[j] for j in range(len(pts))):
            continue
        cell = tuple(sorted(j for j in range(len(pts)) if vals[j] == hs[j]))
        if len(cell) > d:
            raise DegenerateHeights(
                f"heights are degenerate: lower facet on markers {tuple(i + 1 for i in cell)}"
            )
        cells.add(cell)
    if not cells:
        raise DegenerateHeights("no full-dimensional lower facet")
    deg = infer_deg(pts)
    if deg is None:
        raise ValueError("markers do not lie on an integral degree-1 hyperplane")
    return StackyFan(rank=d, rays=tuple(pts), max_cones=tuple(sorted(cells)), deg=deg)
