"""Truncated Gamma-series solutions of the extended hypergeometric system.

Three ingredients combine here.  Exponent vectors are enumerated in windows
of the relation lattice of the marked rays; the reciprocal Gamma factors are
expanded as jets in one nilpotent variable per ray; and the shadow graded
quotient supplies the nilpotent shift operators together with the
finite-dimensional space the series take values in.  Verification routines
check the downward shift identities exactly on truncations, the Euler
relations exactly as matrices, and completeness numerically through the rank
of the assembled solution matrix.
"""

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .box import (
    BoxElement,
    Coord,
    DeltaCorrespondence,
    alpha_key,
    normalize_beta,
    stabilize,
)
from .errors import (
    DegenerateHeights,
    InvalidFan,
    NoParticularSolution,
    ZeroCoordinate,
)
from .fan import StackyFan, validate
from .linalg import (
    im_part,
    integer_kernel_basis,
    mat_inverse,
    re_part,
    scalar_from_parts,
    singular_values,
    solve_integer,
)
from .quotient import ModuleSpec, QuotientAlgebra, build_quotient, graded_piece

# B_2, B_4, ..., B_20; enough for double precision once Re z >= 20
_BERNOULLI = (
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
)

_STIRLING_CUT = 20.0


def poly_mul_trunc(a: Sequence[complex], b: Sequence[complex], order: int) -> tuple[complex, ...]:
    out = [0j] * order
    for s, ca in enumerate(a[:order]):
        if ca == 0:
            continue
        for t, cb in enumerate(b[: order - s]):
            out[s + t] += ca * cb
    return tuple(out)


def exp_jet(a: Sequence[complex], order: int) -> tuple[complex, ...]:
    """exp of the polynomial sum_t a[t] eps^t, truncated to `order` terms."""
    out = [0j] * order
    out[0] = cmath.exp(a[0]) if a else 1 + 0j
    for n in range(1, order):
        acc = 0j
        for t in range(1, n + 1):
            if t < len(a) and a[t] != 0:
                acc += t * a[t] * out[n - t]
        out[n] = acc / n
    return tuple(out)


def linear_mul(jet: Sequence[complex], a: complex, order: int) -> tuple[complex, ...]:
    """Multiply a jet by the linear polynomial a + eps."""
    out = [0j] * order
    for t, c in enumerate(jet[:order]):
        out[t] += a * c
        if t + 1 < order:
            out[t + 1] += c
    return tuple(out)


def polygamma(m: int, z: complex) -> complex:
    """psi^(m)(z) off the poles: upward recurrence, then the Stirling tail."""
    z = complex(z)
    acc = 0j
    sign = -1.0 if m % 2 == 0 else 1.0
    fact_m = math.factorial(m)
    while z.real < _STIRLING_CUT:
        acc += sign * fact_m * z ** (-(m + 1))
        z += 1
    if m == 0:
        val = cmath.log(z) - 0.5 / z
        p = 1 / (z * z)
        for n, b in enumerate(_BERNOULLI, start=1):
            val -= float(b) / (2 * n) * p
            p /= z * z
    else:
        val = math.factorial(m - 1) * z ** (-m) + fact_m / 2 * z ** (-(m + 1))
        p = z ** (-2 - m)
        for n, b in enumerate(_BERNOULLI, start=1):
            val += float(b) * math.factorial(2 * n + m - 1) / math.factorial(2 * n) * p
            p /= z * z
        if m % 2 == 0:
            val = -val
    return val + acc


def log_gamma(z: complex) -> complex:
    """log Gamma by upward recurrence into the Stirling region.

    The branch is irrelevant to every caller here: the value is only ever
    exponentiated, and the recurrence corrections exponentiate back to the
    exact linear factors.
    """
    z = complex(z)
    shift = 0j
    while z.real < _STIRLING_CUT:
        shift += cmath.log(z)
        z += 1
    val = (z - 0.5) * cmath.log(z) - z + 0.5 * math.log(2 * math.pi)
    p = 1 / z
    for n, b in enumerate(_BERNOULLI, start=1):
        val += float(b) / ((2 * n) * (2 * n - 1)) * p
        p /= z * z
    return val - shift


def log_gamma_jet(z: complex, order: int) -> tuple[complex, ...]:
    """Taylor coefficients of eps -> log Gamma(z + eps); needs Re z >= 1.5."""
    coeffs = [log_gamma(z)]
    fact = 1.0
    for t in range(1, order):
        fact *= t
        coeffs.append(polygamma(t - 1, z) / fact)
    return tuple(coeffs)


def reciprocal_gamma_jet(l: complex, order: int) -> tuple[complex, ...]:
    """Taylor coefficients of eps -> 1/Gamma(l + 1 + eps), `order` of them.

    The argument is shifted into Re >= 1.5 by the functional equation, the
    reciprocal is exponentiated from the log-Gamma jet there, and the dropped
    linear factors are multiplied back in.  A pole of Gamma at l + 1 makes
    one factor exactly zero, so the constant term comes out as an exact 0.0.
    """
    z = complex(l) + 1
    m0 = max(0, math.ceil(1.5 - complex(l).real))
    lg = log_gamma_jet(z + m0, order)
    jet = exp_jet(tuple(-c for c in lg), order)
    for j in range(m0):
        jet = linear_mul(jet, z + j, order)
    return jet


@dataclass(frozen=True)
class GkzInstance:
    """Eligible fan, parameter, its stabilization, and the shadow quotient."""

    fan: StackyFan
    beta: tuple[Coord, ...]
    correspondence: DeltaCorrespondence
    quotient: QuotientAlgebra


@dataclass(frozen=True)
class LVector:
    """One exponent vector l with sum(l_i v_i) = beta - v and l - alpha integral.

    offset is that integer vector l - alpha; its l1 norm is the window weight.
    """

    l: tuple[Coord, ...]
    alpha: BoxElement
    v: tuple[int, ...]
    offset: tuple[int, ...]


@dataclass(frozen=True)
class SeriesValue:
    v: tuple[int, ...]
    x: tuple[complex, ...]
    value: tuple[complex, ...]
    truncation_bound: int
    tail_estimate: float


@dataclass(frozen=True)
class TermShiftReport:
    """Exact comparison of shifted term sets, with the window boundary listed."""

    ok: bool
    boundary: tuple[LVector, ...]

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class SolutionSystem:
    vs: tuple[tuple[int, ...], ...]
    matrix: tuple[tuple[complex, ...], ...]
    rank: int
    singular_values: tuple[float, ...]
    gap: float
    rank_deficient: bool
    tail_estimate: float


def build_gkz(fan: StackyFan, beta: Sequence) -> GkzInstance:
    """Stabilize the parameter and build the shadow quotient it acts on."""
    report = validate(fan)
    if not report.gkz_eligible:
        notes = "; ".join(report.violations + report.gkz_notes)
        raise InvalidFan(f"no extended hypergeometric system on this fan: {notes}")
    if fan.deg is None:
        fan = StackyFan(rank=fan.rank, rays=fan.rays, max_cones=fan.max_cones, deg=report.deg)
    b = normalize_beta(fan, beta)
    corr = stabilize(fan, b)
    has_im = any(im_part(x) != 0 for x in b)
    xi = tuple(re_part(x) for x in b)
    quotient = build_quotient(
        ModuleSpec(fan, corr.beta_delta, xi=xi, complex_beta=b if has_im else None)
    )
    return GkzInstance(fan, b, corr, quotient)


def _reduce_particular(part: Sequence[int], kernel: Sequence[Sequence[int]]):
    """Shift a particular solution near the l1 ball center of the lattice."""
    if not kernel:
        return tuple(part), []
    r = len(kernel)
    gram = [[sum(a * b for a, b in zip(kernel[i], kernel[j])) for j in range(r)] for i in range(r)]
    ginv = mat_inverse(gram)
    # G = gram^{-1} K maps m to its exact lattice coordinates
    g = [
        [sum(ginv[i][j] * kernel[j][c] for j in range(r)) for c in range(len(part))]
        for i in range(r)
    ]
    coords = [sum(g[i][c] * part[c] for c in range(len(part))) for i in range(r)]
    shifted = list(part)
    for i in range(r):
        q = round(coords[i])
        for c in range(len(shifted)):
            shifted[c] -= q * kernel[i][c]
    return tuple(shifted), g


def enumerate_L(
    instance: GkzInstance, alpha: BoxElement, v: Sequence[int], B: int
) -> tuple[LVector, ...]:
    """All l with the exact defining relations and integer offset of l1 size <= B."""
    fan = instance.fan
    if B < 0:
        raise ValueError("window bound must be nonnegative")
    v = tuple(int(x) for x in v)
    target = tuple(-vr - nr for vr, nr in zip(v, alpha.lattice_point))
    part = solve_integer(fan.rays, target)
    if part is None:
        raise NoParticularSolution(
            "markers do not reach the requested translate; the marker lattice is degenerate"
        )
    kernel = integer_kernel_basis(fan.rays)
    part, g = _reduce_particular(part, kernel)
    base_norm = sum(abs(x) for x in part)
    ranges = []
    for i in range(len(kernel)):
        bound = max(abs(x) for x in g[i]) * (B + base_norm)
        bound = math.floor(bound)
        ranges.append(range(-bound, bound + 1))
    out = []
    for cs in itertools.product(*ranges):
        m = list(part)
        for i, c in enumerate(cs):
            if c:
                for pos in range(fan.k):
                    m[pos] += c * kernel[i][pos]
        if sum(abs(x) for x in m) > B:
            continue
        l = tuple(
            scalar_from_parts(re_part(a) + mi, im_part(a)) for a, mi in zip(alpha.alpha, m)
        )
        out.append(LVector(l, alpha, v, tuple(m)))
    out.sort(key=lambda lv: lv.offset)
    return tuple(out)


def _as_complex(c: Coord) -> complex:
    return complex(float(re_part(c)), float(im_part(c)))


def _apply_jet(mat, jet, vec):
    """sum_t jet[t] * mat^t vec; mat is nilpotent so the loop is short."""
    n = len(vec)
    out = [jet[0] * x for x in vec]
    cur = vec
    for t in range(1, len(jet)):
        cur = [sum(mat[r][c] * cur[c] for c in range(n)) for r in range(n)]
        if all(x == 0 for x in cur):
            break
        if jet[t] != 0:
            for r in range(n):
                out[r] += jet[t] * cur[r]
    return out


@dataclass(frozen=True)
class _Prepared:
    logs: tuple[complex, ...]
    dmats: tuple
    ray_set: frozenset
    order: int


def _prepare(instance: GkzInstance, xs, arg_offsets=None) -> _Prepared:
    q = instance.quotient
    dmats = tuple(
        tuple(tuple(complex(float(entry)) for entry in row) for row in mat)
        for mat in q.dmats
    )
    # principal branch by default; offsets turn the argument by whole radians
    # per coordinate, selecting another sheet of the multivalued powers
    offs = (0.0,) * len(xs) if arg_offsets is None else tuple(arg_offsets)
    if len(offs) != len(xs):
        raise ValueError(f"arg_offsets must have {len(xs)} entries, got {len(offs)}")
    return _Prepared(
        logs=tuple(cmath.log(c) + 1j * o for c, o in zip(xs, offs)),
        dmats=dmats,
        ray_set=frozenset(instance.fan.fan_indices()),
        order=q.dim,
    )


def _base_vector(instance: GkzInstance, tgt) -> tuple[complex, ...]:
    q = instance.quotient
    evec = [0j] * q.dim
    evec[q.base_index[alpha_key(tgt.alpha)]] = 1 + 0j
    return tuple(evec)


def _term(prep: _Prepared, lv: LVector, evec):
    """Scalar prefactor x^l and the jet-transported quotient vector."""
    scalar = cmath.exp(sum(_as_complex(li) * lg for li, lg in zip(lv.l, prep.logs)))
    w = list(evec)
    for i in range(len(lv.l)):
        li = _as_complex(lv.l[i])
        if i in prep.ray_set:
            jet = poly_mul_trunc(
                exp_jet((0j, prep.logs[i]), prep.order),
                reciprocal_gamma_jet(li, prep.order),
                prep.order,
            )
            w = _apply_jet(prep.dmats[i], jet, w)
        else:
            scalar *= reciprocal_gamma_jet(li, 1)[0]
    return scalar, w


def _check_x(fan: StackyFan, x) -> tuple[complex, ...]:
    xs = tuple(complex(c) for c in x)
    if len(xs) != fan.k:
        raise ValueError(f"x must have {fan.k} coordinates, got {len(xs)}")
    if any(c == 0 for c in xs):
        raise ZeroCoordinate("series evaluation needs nonzero coordinates")
    return xs


def gamma_series(
    instance: GkzInstance, v: Sequence[int], x, B: int, arg_offsets=None
) -> SeriesValue:
    """Window truncation of the series solution indexed by v, at the point x.

    The tail estimate is the max-norm of the outermost window shell, i.e. the
    difference between the values at bounds B and B-1.
    """
    fan = instance.fan
    q = instance.quotient
    xs = _check_x(fan, x)
    prep = _prepare(instance, xs, arg_offsets)
    v = tuple(int(c) for c in v)
    total = [0j] * q.dim
    shell = [0j] * q.dim
    for src, tgt, _ in instance.correspondence.triples:
        evec = _base_vector(instance, tgt)
        for lv in enumerate_L(instance, src, v, B):
            scalar, w = _term(prep, lv, evec)
            for r in range(q.dim):
                total[r] += scalar * w[r]
            if sum(abs(o) for o in lv.offset) == B:
                for r in range(q.dim):
                    shell[r] += scalar * w[r]
    tail = max((abs(c) for c in shell), default=0.0)
    return SeriesValue(v, xs, tuple(total), B, tail)


def gamma_series_derivative(
    instance: GkzInstance, v: Sequence[int], x, B: int, j: int, arg_offsets=None
) -> SeriesValue:
    """Term-analytic partial derivative of the v-series in the j-th coordinate.

    Each term at exponent l differentiates to the shifted exponent l - e_j, an
    element of the term set at index v + v_j; the result is truncated in the
    window of that target set, so it is comparable to gamma_series at v + v_j
    term for term.  The two computations still take independent routes through
    the reciprocal Gamma factors, which is what makes the comparison a check.
    """
    fan = instance.fan
    q = instance.quotient
    xs = _check_x(fan, x)
    prep = _prepare(instance, xs, arg_offsets)
    v = tuple(int(c) for c in v)
    v2 = tuple(a + b for a, b in zip(v, fan.rays[j]))
    total = [0j] * q.dim
    shell = [0j] * q.dim
    for src, tgt, _ in instance.correspondence.triples:
        evec = _base_vector(instance, tgt)
        for shifted in enumerate_L(instance, src, v2, B):
            lv = LVector(
                l=tuple(
                    scalar_from_parts(re_part(c) + (1 if i == j else 0), im_part(c))
                    for i, c in enumerate(shifted.l)
                ),
                alpha=shifted.alpha,
                v=v,
                offset=tuple(
                    o + (1 if i == j else 0) for i, o in enumerate(shifted.offset)
                ),
            )
            scalar, w = _term(prep, lv, evec)
            lj = _as_complex(lv.l[j])
            dw = [
                sum(prep.dmats[j][r][c] * w[c] for c in range(q.dim))
                for r in range(q.dim)
            ]
            term = [scalar * (lj * w[r] + dw[r]) / xs[j] for r in range(q.dim)]
            for r in range(q.dim):
                total[r] += term[r]
            if sum(abs(o) for o in shifted.offset) == B:
                for r in range(q.dim):
                    shell[r] += term[r]
    tail = max((abs(c) for c in shell), default=0.0)
    return SeriesValue(v, xs, tuple(total), B, tail)


def verify_term_shift(instance: GkzInstance, v: Sequence[int], j: int, B: int) -> TermShiftReport:
    """Exact check that shifting terms of the v-series down in coordinate j
    reproduces the term set of the series at v + v_j.

    Offsets of l1 size within B - 1 must match exactly; anything outside that
    core window is collected as the boundary, never silently dropped.
    """
    fan = instance.fan
    v = tuple(int(x) for x in v)
    v2 = tuple(a + b for a, b in zip(v, fan.rays[j]))
    core = B - 1
    ok = True
    boundary: list[LVector] = []
    for src, _, _ in instance.correspondence.triples:
        left = {}
        for lv in enumerate_L(instance, src, v, B):
            m2 = tuple(o - (1 if i == j else 0) for i, o in enumerate(lv.offset))
            if sum(abs(x) for x in m2) <= core:
                left[m2] = lv
            else:
                boundary.append(lv)
        right = {}
        for lv in enumerate_L(instance, src, v2, B):
            if sum(abs(x) for x in lv.offset) <= core:
                right[lv.offset] = lv
            else:
                boundary.append(lv)
        if set(left) != set(right):
            ok = False
    return TermShiftReport(ok, tuple(boundary))


def verify_euler(instance: GkzInstance) -> bool:
    """True iff every degree functional kills the assembled shift operators,
    exactly in rational arithmetic."""
    q = instance.quotient
    fan = instance.fan
    dim = q.dim
    for r in range(fan.rank):
        acc = [[Fraction(0)] * dim for _ in range(dim)]
        for i in fan.fan_indices():
            coef = fan.rays[i][r]
            if coef == 0:
                continue
            mat = q.dmats[i]
            for a in range(dim):
                for b in range(dim):
                    acc[a][b] += coef * mat[a][b]
        if any(any(x != 0 for x in row) for row in acc):
            return False
    return True


def solution_system(
    instance: GkzInstance, x, B: int, v_degree_cap: int = 2, arg_offsets=None
) -> SolutionSystem:
    """Series values for all index points up to the degree cap, with the
    numerical rank of the stacked matrix.

    rank_deficient flags rank < dim instead of raising: a too-small window is
    reported together with its tail estimate for diagnosis.
    """
    fan = instance.fan
    spec0 = ModuleSpec(fan, tuple(Fraction(0) for _ in range(fan.rank)))
    vs: list[tuple[int, ...]] = []
    for m in range(v_degree_cap + 1):
        vs.extend(graded_piece(spec0, m).points)
    rows = []
    tail = 0.0
    for v in vs:
        sv = gamma_series(instance, v, x, B, arg_offsets)
        rows.append(sv.value)
        tail = max(tail, sv.tail_estimate)
    svals = singular_values(rows)
    dim = instance.quotient.dim
    top = svals[0] if svals else 0.0
    rank = sum(1 for s in svals if top > 0 and s > 1e-9 * top)
    sd = svals[dim - 1] if dim - 1 < len(svals) else 0.0
    sn = svals[dim] if dim < len(svals) else 0.0
    if sd == 0.0:
        gap = 0.0
    elif sn == 0.0:
        gap = math.inf
    else:
        gap = sd / sn
    return SolutionSystem(
        vs=tuple(vs),
        matrix=tuple(tuple(row) for row in rows),
        rank=rank,
        singular_values=tuple(svals),
        gap=gap,
        rank_deficient=rank < dim,
        tail_estimate=tail,
    )


def suggest_x(instance: GkzInstance, heights: Sequence, target: float = 1e-2) -> tuple[float, ...]:
    """Evaluation point from triangulation heights: x_i = rho^h_i with rho set
    so every relation-lattice generator contracts its monomial to the target."""
    fan = instance.fan
    if len(heights) != fan.k:
        raise ValueError(f"heights must have {fan.k} entries, got {len(heights)}")
    hs = [Fraction(h) for h in heights]
    kernel = integer_kernel_basis(fan.rays)
    if not kernel:
        return (1.0,) * fan.k
    pairings = []
    for gen in kernel:
        s = sum(h * g for h, g in zip(hs, gen))
        if s == 0:
            raise DegenerateHeights(
                "heights pair to zero with a relation-lattice generator"
            )
        pairings.append(abs(s))
    rho = target ** (1 / float(min(pairings)))
    return tuple(rho ** float(h) for h in hs)
