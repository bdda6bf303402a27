"""Exact rational and Gaussian-rational linear algebra.

Rationals are `fractions.Fraction` throughout, serialized as "p/q" in lowest
terms with positive denominator.  Integer lattice work (Hermite and Smith
normal forms, integer solving) uses arbitrary-precision ints.  The only
floating-point routine is `rank_over_C`.
"""

from __future__ import annotations

import math
import re as _re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DependentGenerators, NotInSpan

Rational = Fraction
IntMatrix = list[list[int]]


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise ValueError(f"cannot parse rational from {s!r}")


@dataclass(frozen=True)
class GaussianRational:
    """Complex number with rational real and imaginary parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __add__(self, other):
        other = as_gaussian(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_gaussian(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_gaussian(other).__sub__(self)

    def __mul__(self, other):
        other = as_gaussian(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_gaussian(other)
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / den,
            (self.im * other.re - self.re * other.im) / den,
        )

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def is_real(self) -> bool:
        return self.im == 0

    def is_integer(self) -> bool:
        return self.im == 0 and self.re.denominator == 1

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def __str__(self):
        return format_gaussian(self)


def as_gaussian(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(Fraction(x))
    raise TypeError(f"cannot coerce {x!r} to GaussianRational")


GR_ZERO = GaussianRational(Fraction(0))
GR_ONE = GaussianRational(Fraction(1))

_GAUSSIAN_RE = _re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:/\d+)?)?\s*"
    r"(?P<im>[+-]\s*\d+(?:/\d+)?)?\s*(?P<i>i)?\s*$"
)


def format_gaussian(z: GaussianRational) -> str:
    if z.im == 0:
        return format_rational(z.re)
    im = format_rational(z.im)
    if z.re == 0:
        return f"{im}i"
    sign = "+" if z.im > 0 else "-"
    return f"{format_rational(z.re)}{sign}{format_rational(abs(z.im))}i"


def parse_gaussian(s) -> GaussianRational:
    """Accepts "p/q", "p/q+r/si", "r/si", or a {"re": .., "im": ..} mapping."""
    if isinstance(s, GaussianRational):
        return s
    if isinstance(s, (int, Fraction)):
        return GaussianRational(Fraction(s))
    if isinstance(s, dict):
        return GaussianRational(
            parse_rational(s.get("re", 0)), parse_rational(s.get("im", 0))
        )
    if isinstance(s, str):
        t = s.strip().replace(" ", "")
        if not t.endswith("i"):
            return GaussianRational(parse_rational(t))
        body = t[:-1]
        # split off the trailing rational as the imaginary part
        m = _re.match(r"^(.*?)([+-]?\d+(?:/\d+)?)$", body)
        if not m:
            raise ValueError(f"cannot parse Gaussian rational from {s!r}")
        head, imag = m.groups()
        re_part = parse_rational(head) if head not in ("", "+", "-") else Fraction(0)
        return GaussianRational(re_part, parse_rational(imag))
    raise ValueError(f"cannot parse Gaussian rational from {s!r}")


def gaussian_floor_reduce(c: GaussianRational) -> tuple[GaussianRational, int]:
    """Split c into (c - floor(Re c), floor(Re c)); result has Re in [0,1)."""
    f = math.floor(c.re)
    return GaussianRational(c.re - f, c.im), f


def re_part(x) -> Fraction:
    return x.re if isinstance(x, GaussianRational) else Fraction(x)


def im_part(x) -> Fraction:
    return x.im if isinstance(x, GaussianRational) else Fraction(0)


def scalar_from_parts(re: Fraction, im: Fraction):
    """Fraction when im == 0, GaussianRational otherwise."""
    return Fraction(re) if im == 0 else GaussianRational(re, im)


# ---------------------------------------------------------------------------
# rational vectors and matrices (tuples / lists of Fractions)


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(s, a):
    return tuple(s * x for x in a)


def dot(a, b):
    return sum((x * y for x, y in zip(a, b)), start=Fraction(0))


def mat_vec(rows: Sequence[Sequence[Fraction]], v: Sequence) -> tuple:
    return tuple(sum((r[j] * v[j] for j in range(len(v))), start=r[0] * 0) for r in rows)


def identity_rational(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_inverse(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse of a square rational matrix; raises DependentGenerators."""
    n = len(rows)
    aug = [[Fraction(rows[i][j]) for j in range(n)] + identity_rational(n)[i] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise DependentGenerators("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def det_rational(rows: Sequence[Sequence]) -> Fraction:
    n = len(rows)
    m = [[Fraction(rows[i][j]) for j in range(n)] for i in range(n)]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def solve_simplicial_coords(gens: Sequence[Sequence[int]], p: Sequence) -> tuple:
    """Coordinates of p in linearly independent generators (columns).

    p may have Fraction or GaussianRational entries; the coordinate vector is
    returned with entries of the same kind.  Raises DependentGenerators if the
    generators are dependent and NotInSpan if p lies outside their span.
    """
    d = len(gens[0])
    m = len(gens)
    pg = [as_gaussian(x) if not isinstance(x, GaussianRational) else x for x in p]
    complex_input = any(isinstance(x, GaussianRational) for x in p)
    # augmented system [A | re p | im p], A[d][m] with columns the generators
    a = [[Fraction(gens[j][i]) for j in range(m)] + [pg[i].re, pg[i].im] for i in range(d)]
    pivots = []
    row = 0
    for col in range(m):
        piv = next((r for r in range(row, d) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = Fraction(1) / a[row][col]
        a[row] = [x * inv for x in a[row]]
        for r in range(d):
            if r != row and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
    if len(pivots) < m:
        raise DependentGenerators("generators are linearly dependent")
    for r in range(row, d):
        if a[r][m] != 0 or a[r][m + 1] != 0:
            raise NotInSpan("point is not in the span of the generators")
    coords = [GaussianRational(a[i][m], a[i][m + 1]) for i in range(m)]
    if complex_input:
        return tuple(coords)
    return tuple(c.re for c in coords)


def in_span_coords(gens: Sequence[Sequence[int]], p: Sequence):
    """Like solve_simplicial_coords but returns None instead of NotInSpan."""
    try:
        return solve_simplicial_coords(gens, p)
    except NotInSpan:
        return None


# ---------------------------------------------------------------------------
# integer normal forms


def _copy_int(a: Sequence[Sequence[int]]) -> IntMatrix:
    return [[int(x) for x in row] for row in a]


def hermite_normal_form(a: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.  Returns (H, U) with U unimodular, U*A = H.

    Pivots are positive, entries above each pivot are reduced into [0, pivot),
    and zero rows sit at the bottom.
    """
    h = _copy_int(a)
    n = len(h)
    cols = len(h[0]) if n else 0
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    row = 0
    for col in range(cols):
        if row >= n:
            break
        while True:
            nz = [i for i in range(row, n) if h[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(h[i][col]))
            done = True
            for i in nz:
                if i == i0:
                    continue
                q = h[i][col] // h[i0][col]
                if q != 0:
                    h[i] = [x - q * y for x, y in zip(h[i], h[i0])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[i0])]
                if h[i][col] != 0:
                    done = False
            if done:
                h[row], h[i0] = h[i0], h[row]
                u[row], u[i0] = u[i0], u[row]
                break
        if h[row][col] == 0:
            continue
        if h[row][col] < 0:
            h[row] = [-x for x in h[row]]
            u[row] = [-x for x in u[row]]
        for i in range(row):
            q = h[i][col] // h[row][col]
            if q != 0:
                h[i] = [x - q * y for x, y in zip(h[i], h[row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[row])]
        row += 1
    return h, u


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form.  Returns (D, S, T) with S*A*T = D diagonal,
    S and T unimodular, and nonnegative diagonal entries d1 | d2 | ... ."""
    m = _copy_int(a)
    n = len(m)
    c = len(m[0]) if n else 0
    s = [[int(i == j) for j in range(n)] for i in range(n)]
    t = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        s[i], s[j] = s[j], s[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in t:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        m[dst] = [x + q * y for x, y in zip(m[dst], m[src])]
        s[dst] = [x + q * y for x, y in zip(s[dst], s[src])]

    def add_col(dst, src, q):
        for row in m:
            row[dst] += q * row[src]
        for row in t:
            row[dst] += q * row[src]

    k = 0
    while k < min(n, c):
        # locate smallest nonzero entry in the trailing submatrix
        best = None
        for i in range(k, n):
            for j in range(k, c):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(k, best[0])
        swap_cols(k, best[1])
        while True:
            reduced = True
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    q = m[i][k] // m[k][k]
                    add_row(i, k, -q)
                    if m[i][k] != 0:
                        swap_rows(k, i)
                        reduced = False
            for j in range(k + 1, c):
                if m[k][j] != 0:
                    q = m[k][j] // m[k][k]
                    add_col(j, k, -q)
                    if m[k][j] != 0:
                        swap_cols(k, j)
                        reduced = False
            if reduced:
                # force divisibility of the rest of the submatrix
                viol = None
                for i in range(k + 1, n):
                    for j in range(k + 1, c):
                        if m[i][j] % m[k][k] != 0:
                            viol = i
                            break
                    if viol is not None:
                        break
                if viol is None:
                    break
                add_row(k, viol, 1)
        if m[k][k] < 0:
            m[k] = [-x for x in m[k]]
            s[k] = [-x for x in s[k]]
        k += 1
    return m, s, t


def solve_integer(rays: Sequence[Sequence[int]], target: Sequence[int]):
    """Integer solution m of sum_i m_i * rays[i] = target, or None."""
    h, u = hermite_normal_form(rays)
    k = len(rays)
    d = len(target)
    y = [0] * k
    resid = [int(x) for x in target]
    for i in range(k):
        piv = next((j for j in range(d) if h[i][j] != 0), None)
        if piv is None:
            break
        if resid[piv] % h[i][piv] != 0:
            return None
        q = resid[piv] // h[i][piv]
        y[i] = q
        resid = [x - q * hx for x, hx in zip(resid, h[i])]
    if any(resid):
        return None
    return tuple(sum(u[i][j] * y[i] for i in range(k)) for j in range(k))


def integer_kernel_basis(rays: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis of {m in Z^k : sum_i m_i * rays[i] = 0}."""
    h, u = hermite_normal_form(rays)
    return [tuple(u[i]) for i in range(len(rays)) if all(x == 0 for x in h[i])]


def lattice_generates(rays: Sequence[Sequence[int]]) -> bool:
    """True iff the rows generate Z^d as a group."""
    d = len(rays[0])
    h, _ = hermite_normal_form(rays)
    nonzero = [row for row in h if any(row)]
    if len(nonzero) < d:
        return False
    idx = abs(det_rational([row[:d] for row in nonzero[:d]]))
    return idx == 1


def rank_over_C(matrix, rtol: float = 1e-9) -> int:
    """Numerical rank of a complex matrix via singular values."""
    m = np.asarray(matrix, dtype=complex)
    if m.size == 0:
        return 0
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


def singular_values(matrix) -> list[float]:
    m = np.asarray(matrix, dtype=complex)
    if m.size == 0:
        return []
    return [float(x) for x in np.linalg.svd(m, compute_uv=False)]
