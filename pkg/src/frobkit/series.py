"""Windowed truncated Laurent series and circle-sample arithmetic.

Two kinds of objects live here:

* :class:`Series` -- a finite window of Laurent coefficients in one of two
  charts (powers of ``(z - center)`` for expansions around a finite point,
  or powers of ``z`` for expansions at infinity), together with an
  *exactness window* recording which coefficients are guaranteed
  uncontaminated by truncation.
* :class:`CircleSamples` -- values of an annulus function at N uniform
  points of the unit circle, used for quadrature, coefficient extraction,
  and branch-tracked fractional powers and logarithms.

Exactness convention: a series is structurally zero beyond its storage
window on a given side if and only if the exactness window touches the
storage window on that side.  A truncated one-sided expansion therefore
always carries one sacrificial inexact slot marking the open side.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

POLE = "pole"
INF = "inf"

# Sentinel exponent bound standing in for +/- infinity in window arithmetic.
BIG = 10**9

_TWO_PI = 2.0 * math.pi


class WindowExhausted(ArithmeticError):
    """No coefficient of the result is guaranteed exact."""


class ChartMismatch(ValueError):
    """Operands live in different charts or have different centers."""


class BranchError(ValueError):
    """A root or logarithm cannot be taken single-valuedly."""


@dataclass(frozen=True)
class Series:
    """Laurent coefficients on an exponent window ``[lo, lo+len-1]``.

    ``coeffs[k]`` multiplies ``(z-center)**(lo+k)`` in the pole chart and
    ``z**(lo+k)`` in the infinity chart.  Coefficients with exponent in
    ``[exact_lo, exact_hi]`` are exact; the rest are best-effort values.
    """

    chart: str
    center: complex
    lo: int
    coeffs: np.ndarray
    exact_lo: int
    exact_hi: int

    @property
    def hi(self) -> int:
        return self.lo + len(self.coeffs) - 1

    @property
    def support_lo(self) -> int:
        """Smallest exponent where a term may exist (-BIG if open below)."""
        return self.lo if self.exact_lo == self.lo else -BIG

    @property
    def support_hi(self) -> int:
        return self.hi if self.exact_hi == self.hi else BIG

    def coeff(self, k: int, strict: bool = True) -> complex:
        """Coefficient at exponent ``k``; zero outside the window.

        With ``strict`` the exponent must be exact or structurally zero.
        """
        if self.lo <= k <= self.hi:
            if strict and not (self.exact_lo <= k <= self.exact_hi):
                raise WindowExhausted(
                    f"coefficient at exponent {k} is not exact "
                    f"(exact window [{self.exact_lo},{self.exact_hi}])")
            return complex(self.coeffs[k - self.lo])
        if strict and (self.support_lo == -BIG and k < self.lo):
            raise WindowExhausted(f"exponent {k} below truncated window")
        if strict and (self.support_hi == BIG and k > self.hi):
            raise WindowExhausted(f"exponent {k} above truncated window")
        return 0.0

    def is_zero(self, tol: float = 0.0) -> bool:
        return (self.support_lo > -BIG and self.support_hi < BIG
                and bool(np.all(np.abs(self.coeffs) <= tol)))

    def __repr__(self) -> str:  # compact, window-first
        return (f"Series({self.chart}, c={self.center:.3g}, "
                f"win=[{self.lo},{self.hi}], exact=[{self.exact_lo},{self.exact_hi}])")


def make_series(chart: str, center: complex, lo: int, coeffs,
                exact_lo: int | None = None, exact_hi: int | None = None) -> Series:
    arr = np.asarray(coeffs, dtype=np.complex128).copy()
    if arr.ndim != 1 or len(arr) == 0:
        raise ValueError("coeffs must be a nonempty 1-d array")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise ValueError("coefficients must be finite")
    hi = lo + len(arr) - 1
    elo = lo if exact_lo is None else exact_lo
    ehi = hi if exact_hi is None else exact_hi
    if not (lo <= elo <= ehi <= hi):
        raise WindowExhausted(
            f"window exhausted: exact [{elo},{ehi}] not inside [{lo},{hi}]")
    return Series(chart, complex(center), lo, arr, elo, ehi)


def zero_series(chart: str, center: complex) -> Series:
    return make_series(chart, center, 0, [0.0])


def monomial(chart: str, center: complex, k: int, c: complex = 1.0) -> Series:
    return make_series(chart, center, k, [c])


def from_terms(chart: str, center: complex, terms: dict[int, complex]) -> Series:
    if not terms:
        return zero_series(chart, center)
    lo, hi = min(terms), max(terms)
    arr = np.zeros(hi - lo + 1, dtype=np.complex128)
    for k, c in terms.items():
        arr[k - lo] = c
    return make_series(chart, center, lo, arr)


def _check_same_chart(f: Series, g: Series) -> None:
    if f.chart != g.chart or (f.chart == POLE and f.center != g.center):
        raise ChartMismatch(f"chart mismatch: {f!r} vs {g!r}")


def _known_interval(f: Series) -> tuple[int, int]:
    """Exponent interval on which f is known (exact or structurally zero)."""
    kl = -BIG if f.exact_lo == f.lo else f.exact_lo
    kh = BIG if f.exact_hi == f.hi else f.exact_hi
    return kl, kh


def _assemble(chart, center, lo, hi, arr, know_lo, know_hi) -> Series:
    """Build a series on [lo,hi] whose known interval is [know_lo, know_hi]."""
    if know_lo > know_hi:
        raise WindowExhausted("window exhausted: no exact coefficients remain")
    # Trim the window to the known region plus one sentinel slot per open side.
    new_lo = max(lo, know_lo if know_lo > -BIG else lo)
    new_hi = min(hi, know_hi if know_hi < BIG else hi)
    if know_lo > lo:
        new_lo = max(lo, know_lo - 1)
    if know_hi < hi:
        new_hi = min(hi, know_hi + 1)
    if new_lo > new_hi:
        raise WindowExhausted("window exhausted: empty result window")
    sub = arr[new_lo - lo:new_hi - lo + 1]
    elo = max(new_lo, know_lo)
    ehi = min(new_hi, know_hi)
    return make_series(chart, center, new_lo, sub, elo, ehi)


def lin_comb(f: Series, g: Series, cf: complex = 1.0, cg: complex = 1.0) -> Series:
    """``cf*f + cg*g`` on the union window; knowledge intervals intersect."""
    _check_same_chart(f, g)
    lo = min(f.lo, g.lo)
    hi = max(f.hi, g.hi)
    arr = np.zeros(hi - lo + 1, dtype=np.complex128)
    arr[f.lo - lo:f.hi - lo + 1] += cf * f.coeffs
    arr[g.lo - lo:g.hi - lo + 1] += cg * g.coeffs
    fkl, fkh = _known_interval(f)
    gkl, gkh = _known_interval(g)
    return _assemble(f.chart, f.center, lo, hi, arr, max(fkl, gkl), min(fkh, gkh))


def add(f: Series, g: Series) -> Series:
    return lin_comb(f, g)


def sub(f: Series, g: Series) -> Series:
    return lin_comb(f, g, 1.0, -1.0)


def scale(f: Series, c: complex) -> Series:
    return make_series(f.chart, f.center, f.lo, c * f.coeffs, f.exact_lo, f.exact_hi)


def mul(f: Series, g: Series) -> Series:
    """Cauchy product with exactness tracking.

    A product coefficient at exponent k is exact when every contributing
    exponent pair lies inside both operands' exact windows, taking possibly
    nonzero truncated tails into account.
    """
    _check_same_chart(f, g)
    if (f.is_zero() and f.exact_lo == f.lo and f.exact_hi == f.hi) or \
       (g.is_zero() and g.exact_lo == g.lo and g.exact_hi == g.hi):
        return zero_series(f.chart, f.center)
    arr = np.convolve(f.coeffs, g.coeffs)
    lo = f.lo + g.lo
    hi = f.hi + g.hi
    know_lo, know_hi = -BIG, BIG
    sf_lo, sf_hi = f.support_lo, f.support_hi
    sg_lo, sg_hi = g.support_lo, g.support_hi
    if sf_lo == -BIG:  # f has unknown terms below exact_lo
        know_lo = max(know_lo, f.exact_lo + sg_hi)
    if sg_lo == -BIG:
        know_lo = max(know_lo, sf_hi + g.exact_lo)
    if sf_hi == BIG:
        know_hi = min(know_hi, f.exact_hi + sg_lo)
    if sg_hi == BIG:
        know_hi = min(know_hi, sf_lo + g.exact_hi)
    return _assemble(f.chart, f.center, lo, hi, arr, know_lo, know_hi)


def d_dz(f: Series) -> Series:
    """Derivative; the exponent window shifts down by one."""
    k = np.arange(f.lo, f.hi + 1)
    return make_series(f.chart, f.center, f.lo - 1, k * f.coeffs,
                       f.exact_lo - 1, f.exact_hi - 1)


def project(f: Series, sign: str) -> Series:
    """Nonnegative-exponent part (``plus``) or negative part (``minus``)."""
    if f.chart != POLE:
        raise ChartMismatch("projections are defined in the pole chart")
    if sign == "plus":
        return clip_low(f, 0)
    if sign == "minus":
        return clip_high(f, -1)
    raise ValueError("sign must be 'plus' or 'minus'")


def clip_low(f: Series, a: int) -> Series:
    """Discard exponents below ``a``; the result is structurally zero there."""
    if a <= f.support_lo:
        return f
    if a > f.hi:
        return zero_series(f.chart, f.center)
    kl, kh = _known_interval(f)
    arr = f.coeffs[a - f.lo:] if a > f.lo else f.coeffs
    lo = max(a, f.lo)
    return _assemble(f.chart, f.center, lo, f.hi, arr, max(kl, a), kh)


def clip_high(f: Series, b: int) -> Series:
    """Discard exponents above ``b``."""
    if b >= f.support_hi:
        return f
    if b < f.lo:
        return zero_series(f.chart, f.center)
    kl, kh = _known_interval(f)
    arr = f.coeffs[:b - f.lo + 1]
    return _assemble(f.chart, f.center, f.lo, b, arr, kl, min(kh, b))


def window_clip(f: Series, bound: str) -> Series:
    """Clip per a bound of the form ``">=a"`` or ``"<=b"``."""
    if bound.startswith(">="):
        return clip_low(f, int(bound[2:]))
    if bound.startswith("<="):
        return clip_high(f, int(bound[2:]))
    raise ValueError("bound must look like '>=a' or '<=b'")


def residue(f: Series) -> complex:
    """Residue of ``f dz``: the -1 coefficient (negated in the infinity chart)."""
    c = f.coeff(-1, strict=True)
    return -c if f.chart == INF else c


def mul_by_z(f: Series) -> Series:
    """Multiply by z.  In the pole chart z = (z-center) + center, exactly."""
    if f.chart == INF:
        return make_series(INF, 0.0, f.lo + 1, f.coeffs, f.exact_lo + 1, f.exact_hi + 1)
    shifted = make_series(POLE, f.center, f.lo + 1, f.coeffs,
                          f.exact_lo + 1, f.exact_hi + 1)
    return lin_comb(shifted, f, 1.0, f.center)


# ---------------------------------------------------------------------------
# circle samples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircleSamples:
    """Values of a function at the N-th roots of unity, counterclockwise."""

    values: np.ndarray

    @property
    def n_samples(self) -> int:
        return len(self.values)

    def __post_init__(self):
        n = len(self.values)
        if n < 32 or (n & (n - 1)) != 0:
            raise ValueError("n_samples must be a power of two, >= 32")


def circle_nodes(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def samples(values) -> CircleSamples:
    return CircleSamples(np.asarray(values, dtype=np.complex128))


def const_samples(c: complex, n: int) -> CircleSamples:
    return CircleSamples(np.full(n, complex(c), dtype=np.complex128))


def _unwrapped_angles(values: np.ndarray) -> tuple[np.ndarray, float]:
    """Unwrapped arguments anchored at sample 0, plus the total increment.

    The total includes the closing step from the last sample back to the
    first, so ``total / 2pi`` is the winding number about the origin.
    """
    if np.any(values == 0):
        raise BranchError("zero sample encountered on the circle")
    theta = np.unwrap(np.angle(values))
    closing = np.angle(values[0]) - theta[-1]
    closing = (closing + math.pi) % _TWO_PI - math.pi
    total = theta[-1] + closing - theta[0]
    return theta, total


def winding_number(fs: CircleSamples) -> int:
    """Winding about the origin by the discrete argument principle."""
    _, total = _unwrapped_angles(fs.values)
    w = total / _TWO_PI
    k = round(w)
    if abs(w - k) >= 0.1:
        raise BranchError(f"winding number ill-determined: {w:.4f}")
    return k


def power_on_circle(fs: CircleSamples, alpha, allow_cut: bool = False) -> CircleSamples:
    """Continuous ``alpha``-th power along the circle, anchored at sample 0.

    Requires ``winding * alpha`` to be an integer unless a branch cut
    between the last and first sample is explicitly accepted.
    """
    alpha = Fraction(alpha) if isinstance(alpha, (int, Rational, str)) else alpha
    theta, total = _unwrapped_angles(fs.values)
    w = total / _TWO_PI
    k = round(w)
    if abs(w - k) >= 0.1:
        raise BranchError(f"winding number ill-determined: {w:.4f}")
    wa = k * alpha
    if not allow_cut and (isinstance(wa, Fraction) and wa.denominator != 1
                          or not isinstance(wa, Fraction) and abs(wa - round(wa)) > 1e-9):
        raise BranchError(
            f"winding {k} times exponent {alpha} is not an integer; "
            "the power is not single-valued on the circle")
    af = float(alpha)
    vals = np.abs(fs.values) ** af * np.exp(1j * af * theta)
    return CircleSamples(vals)


def log_on_circle(fs: CircleSamples, mode: str = "strict") -> CircleSamples:
    """Logarithm along the circle, anchored at sample 0 by the principal value.

    ``strict`` requires winding zero (the unwrapped ends meet); ``cut``
    places the 2*pi*i*winding jump between the last and first sample.
    """
    theta, total = _unwrapped_angles(fs.values)
    w = total / _TWO_PI
    k = round(w)
    if abs(w - k) >= 0.1:
        raise BranchError(f"winding number ill-determined: {w:.4f}")
    if mode == "strict" and k != 0:
        raise BranchError(f"nonzero winding {k}: single-valued log does not exist")
    if mode not in ("strict", "cut"):
        raise ValueError("mode must be 'strict' or 'cut'")
    return CircleSamples(np.log(np.abs(fs.values)) + 1j * theta)


def contour_integral(fs: CircleSamples) -> complex:
    """Trapezoid rule for ``(1/2 pi i) * contour integral of f dz``."""
    n = fs.n_samples
    return complex(np.mean(fs.values * circle_nodes(n)))


def eval_on_circle(f: Series, n_samples: int = 256) -> CircleSamples:
    base = circle_nodes(n_samples)
    if f.chart == POLE:
        base = base - f.center
    vals = np.zeros(n_samples, dtype=np.complex128)
    p = base ** f.lo
    for c in f.coeffs:
        if c != 0:
            vals += c * p
        p = p * base
    return CircleSamples(vals)


def spectral_dz(fs: CircleSamples) -> CircleSamples:
    """d/dz of an annulus function from its circle samples (spectral)."""
    n = fs.n_samples
    freqs = np.fft.fftfreq(n, d=1.0 / n)
    fz = np.fft.ifft(np.fft.fft(fs.values) * freqs) / circle_nodes(n)
    return CircleSamples(fz)


def samples_to_series(fs: CircleSamples, chart: str, center: complex,
                      lo: int, hi: int, guard: int = 2) -> Series:
    """Coefficients ``(1/2 pi i) * integral of f(z) (z-c)^(-k-1) dz`` on [lo,hi].

    The outermost ``guard`` coefficients on each side are kept but marked
    inexact to absorb quadrature aliasing.
    """
    n = fs.n_samples
    if hi - lo + 1 > n // 2:
        raise ValueError("requested window wider than n_samples/2")
    if lo + guard > hi - guard:
        raise ValueError("window too narrow for the guard band")
    z = circle_nodes(n)
    base = z - center if chart == POLE else z
    ks = np.arange(lo, hi + 1)
    # B[j, k] = base_k**(-ks[j]-1) * z_k / n
    powers = base[None, :] ** (-(ks[:, None]) - 1)
    coeffs = powers @ (fs.values * z) / n
    return make_series(chart, center if chart == POLE else 0.0, lo, coeffs,
                       lo + guard, hi - guard)


def rechart(f: Series, chart: str, center: complex, lo: int, hi: int,
            n_samples: int = 256, guard: int = 2) -> Series:
    """Re-expand around a new center via the circle (quadrature-accurate)."""
    return samples_to_series(eval_on_circle(f, n_samples), chart, center,
                             lo, hi, guard)


# ---------------------------------------------------------------------------
# exact chart changes for one-sided data
# ---------------------------------------------------------------------------

def pole_to_inf_exact(f: Series, lo: int) -> Series:
    """Expand a fully exact pole-chart Laurent polynomial at infinity.

    Each monomial ``(z-c)**j`` contributes binomially; negative-``j``
    monomials have infinite descending tails, truncated below ``lo``
    (every kept coefficient is exact).
    """
    if f.chart != POLE:
        raise ChartMismatch("input must be in the pole chart")
    if f.exact_lo != f.lo or f.exact_hi != f.hi:
        raise WindowExhausted("exact chart change needs a fully exact input")
    c = f.center
    hi = max(f.hi, lo)
    out = np.zeros(hi - lo + 2, dtype=np.complex128)  # extra sentinel slot at lo-1
    has_tail = False
    for j in range(f.lo, f.hi + 1):
        cj = f.coeffs[j - f.lo]
        if cj == 0:
            continue
        if j >= 0:
            term = 1.0 + 0.0j
            for i in range(j + 1):  # (z-c)^j = sum C(j,i) (-c)^i z^(j-i)
                if lo <= j - i <= hi:
                    out[j - i - (lo - 1)] += cj * term
                term = term * (-c) * (j - i) / (i + 1)
        else:
            has_tail = True
            term = 1.0 + 0.0j
            i = 0
            while j - i >= lo - 1:
                out[j - i - (lo - 1)] += cj * term
                term = term * (-c) * (j - i) / (i + 1)
                i += 1
    if not has_tail:
        return make_series(INF, 0.0, lo - 1, out)
    return make_series(INF, 0.0, lo - 1, out, lo, hi)


def inf_poly_to_pole_exact(f: Series, center: complex) -> Series:
    """Recenter a polynomial in z (exact, finite binomial sums)."""
    if f.chart != INF:
        raise ChartMismatch("input must be in the infinity chart")
    if f.lo < 0 or f.exact_lo != f.lo or f.exact_hi != f.hi:
        raise WindowExhausted("exact recentering needs a fully exact polynomial")
    out = np.zeros(f.hi + 1, dtype=np.complex128)
    for j in range(f.lo, f.hi + 1):
        cj = f.coeffs[j - f.lo]
        if cj == 0:
            continue
        term = 1.0 + 0.0j  # z^j = sum C(j,i) c^(j-i) (z-c)^i
        for i in range(j, -1, -1):
            out[i] += cj * term
            term = term * center * i / (j - i + 1)
    return make_series(POLE, center, 0, out)


# ---------------------------------------------------------------------------
# reciprocals, fractional powers, inversion
# ---------------------------------------------------------------------------

def _extreme(f: Series, side: str) -> tuple[int, complex]:
    """Exponent and coefficient of the structural extreme term on a side."""
    if side == "top":
        if f.support_hi == BIG:
            raise WindowExhausted("top of the series is not structural")
        k = f.hi
        while k >= f.lo and f.coeffs[k - f.lo] == 0:
            k -= 1
    elif side == "bottom":
        if f.support_lo == -BIG:
            raise WindowExhausted("bottom of the series is not structural")
        k = f.lo
        while k <= f.hi and f.coeffs[k - f.lo] == 0:
            k += 1
    else:
        raise ValueError("side must be 'top' or 'bottom'")
    if k < f.lo or k > f.hi:
        raise ValueError("series is identically zero")
    if not (f.exact_lo <= k <= f.exact_hi):
        raise WindowExhausted("extreme coefficient is not exact")
    return k, complex(f.coeffs[k - f.lo])


def _normalized_tail(f: Series, side: str):
    """Write f = c*x^T*(1+u) with u one-sided; return (T, c, u, depth)."""
    t, c = _extreme(f, side)
    shifted = make_series(f.chart, f.center, f.lo - t, f.coeffs / c,
                          f.exact_lo - t, f.exact_hi - t)
    one = monomial(f.chart, f.center, 0)
    u = sub(shifted, one)
    if side == "top":
        u = clip_high(u, -1)
        # a structurally-zero bottom makes the tail fully known to any depth
        depth = BIG if f.exact_lo == f.lo else t - f.exact_lo
    else:
        u = clip_low(u, 1)
        depth = BIG if f.exact_hi == f.hi else f.exact_hi - t
    return t, c, u, depth


def reciprocal_leading(f: Series, side: str, depth: int | None = None) -> Series:
    """Formal reciprocal led by the extreme term on ``side``.

    For ``side='top'`` the result descends from minus the top exponent;
    for ``side='bottom'`` it ascends from minus the bottom exponent.
    """
    t, c, u, avail = _normalized_tail(f, side)
    if depth is None:
        depth = avail
    depth = min(depth, avail) if avail >= 0 else depth
    ucoef = np.zeros(depth + 1, dtype=np.complex128)
    if side == "top":
        # u exponents -depth..-1 relative to the normalized head
        for k in range(u.lo, u.hi + 1):
            if -depth <= k <= -1:
                ucoef[depth + k] = u.coeffs[k - u.lo]
        g = np.zeros(depth + 1, dtype=np.complex128)
        g[depth] = 1.0  # exponent 0 of (1+u)^(-1)
        for r in range(1, depth + 1):
            acc = 0.0 + 0.0j
            for i in range(1, r + 1):
                acc += ucoef[depth - i] * g[depth - r + i]
            g[depth - r] = -acc
        out = make_series(f.chart, f.center, -t - depth - 1,
                          np.concatenate([[0.0], g]) / c,
                          -t - depth, -t)
    else:
        for k in range(u.lo, u.hi + 1):
            if 1 <= k <= depth:
                ucoef[k] = u.coeffs[k - u.lo]
        g = np.zeros(depth + 1, dtype=np.complex128)
        g[0] = 1.0
        for r in range(1, depth + 1):
            acc = 0.0 + 0.0j
            for i in range(1, r + 1):
                acc += ucoef[i] * g[r - i]
            g[r] = -acc
        out = make_series(f.chart, f.center, -t,
                          np.concatenate([g, [0.0]]) / c,
                          -t, -t + depth)
    return out


def _binom_alpha(alpha: Fraction, kmax: int) -> list[float]:
    """Generalized binomial coefficients C(alpha, k) for k = 0..kmax."""
    out = [Fraction(1)]
    for k in range(1, kmax + 1):
        out.append(out[-1] * (alpha - (k - 1)) / k)
    return [float(x) for x in out]


def fractional_power(f: Series, alpha, side: str, depth: int | None = None) -> Series:
    """``f**alpha`` led by the extreme term, via the binomial series.

    The extreme exponent times ``alpha`` must be an integer; the extreme
    coefficient's power uses the principal branch.
    """
    alpha = Fraction(alpha)
    t, c, u, avail = _normalized_tail(f, side)
    if depth is None:
        depth = avail
    depth = min(depth, avail)
    ta = t * alpha
    if ta.denominator != 1:
        raise BranchError(f"extreme exponent {t} times {alpha} is not an integer")
    head_exp = int(ta)
    ca = cmath.exp(float(alpha) * cmath.log(c)) if c != 1 else 1.0 + 0.0j
    binom = _binom_alpha(alpha, depth)
    acc = monomial(f.chart, f.center, 0)
    upow = monomial(f.chart, f.center, 0)
    # truncate u to the needed depth so powers stay small
    u = clip_low(u, -depth) if side == "top" else clip_high(u, depth)
    for k in range(1, depth + 1):
        upow = mul(upow, u)
        upow = clip_low(upow, -depth) if side == "top" else clip_high(upow, depth)
        if binom[k] != 0.0:
            acc = lin_comb(acc, upow, 1.0, binom[k])
    # mark the open side: acc exact only to the computed depth
    if side == "top":
        acc = _assemble(f.chart, f.center, min(acc.lo, -depth - 1), acc.hi,
                        _padded(acc, min(acc.lo, -depth - 1), acc.hi), -depth, 0)
    else:
        acc = _assemble(f.chart, f.center, acc.lo, max(acc.hi, depth + 1),
                        _padded(acc, acc.lo, max(acc.hi, depth + 1)), 0, depth)
    shifted = make_series(acc.chart, acc.center, acc.lo + head_exp, ca * acc.coeffs,
                          acc.exact_lo + head_exp, acc.exact_hi + head_exp)
    return shifted


def _padded(f: Series, lo: int, hi: int) -> np.ndarray:
    out = np.zeros(hi - lo + 1, dtype=np.complex128)
    out[f.lo - lo:f.hi - lo + 1] = f.coeffs
    return out


def lagrange_invert(f: Series, kind: str, depth: int) -> Series:
    """Compositional inverse by iterated substitution.

    ``kind='at_infinity'``: f = z + O(1/z) (no constant term); the inverse
    is returned as a descending series in the new variable with unit head.
    ``kind='at_pole'``: f = c/(z-center) + O(1); the inverse z(w) is
    returned as a descending series in w whose constant term is the center.
    """
    if kind == "at_infinity":
        if f.chart != INF:
            raise ChartMismatch("at_infinity inversion expects the infinity chart")
        if abs(f.coeff(1, strict=False) - 1) > 1e-13 or \
           abs(f.coeff(0, strict=False)) > 1e-13:
            raise ValueError("expected normal form z + O(1/z)")
        e = clip_high(f, -1)  # E(z) = f(z) - z
        g = monomial(INF, 0.0, 1)  # g(w) = w
        for _ in range(depth + 2):
            eg = _compose_descending(e, g, depth)
            g = lin_comb(monomial(INF, 0.0, 1), eg, 1.0, -1.0)
            g = clip_low(g, 1 - depth - 1)
        return _mark_open_below(clip_low(g, -depth + 1), 1 - depth)
    if kind == "at_pole":
        if f.chart != POLE:
            raise ChartMismatch("at_pole inversion expects the pole chart")
        cm1 = f.coeff(-1, strict=False)
        if cm1 == 0 or f.lo < -1:
            raise ValueError("expected normal form c/(z-center) + O(1)")
        # Solve f(y) = w for y = z - center as a descending series in w.
        rest = clip_low(f, 0)  # c0 + c1 y + ...
        y = monomial(INF, 0.0, -1, cm1)  # y(w) ~ c/w
        w1 = monomial(INF, 0.0, 1)
        for _ in range(depth + 2):
            ry = _compose_ascending_values(rest, y, depth)
            denom = lin_comb(w1, ry, 1.0, -1.0)
            y = scale(reciprocal_leading(denom, "top", depth + 1), cm1)
            y = clip_low(y, -depth - 1)
        z_of_w = lin_comb(monomial(INF, 0.0, 0, f.center), clip_low(y, -depth), 1.0, 1.0)
        return _mark_open_below(z_of_w, -depth)
    raise ValueError("kind must be 'at_infinity' or 'at_pole'")


def _mark_open_below(f: Series, exact_lo: int) -> Series:
    arr = np.concatenate([[0.0], f.coeffs])
    return make_series(f.chart, f.center, f.lo - 1, arr,
                       max(exact_lo, f.lo), f.exact_hi)


def _compose_descending(e: Series, g: Series, depth: int) -> Series:
    """E(g(w)) for E descending from exponent -1 and g = w + lower."""
    ginv = reciprocal_leading(g, "top", depth + 1)  # 1/g, descending from -1
    acc = zero_series(INF, 0.0)
    p = monomial(INF, 0.0, 0)
    for j in range(1, -e.lo + 1):  # E = sum_{j>=1} e_{-j} z^{-j}
        p = clip_low(mul(p, ginv), -depth - 2)
        cj = e.coeff(-j, strict=False)
        if cj != 0:
            acc = lin_comb(acc, p, 1.0, cj)
    return acc


def _compose_ascending_values(rest: Series, y: Series, depth: int) -> Series:
    """rest(y(w)) for rest ascending in y and y descending from w^-1."""
    acc = zero_series(INF, 0.0)
    p = monomial(INF, 0.0, 0)
    for j in range(0, rest.hi + 1):
        cj = rest.coeff(j, strict=False)
        if cj != 0:
            acc = lin_comb(acc, p, 1.0, cj)
        p = clip_low(mul(p, y), -depth - 2)
    return acc
