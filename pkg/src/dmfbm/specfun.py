"""Real-parameter special functions: gamma, beta and Gauss 2F1 on [0, 1].

The hypergeometric evaluator covers exactly the regime needed by the
singular-kernel machinery: parameters with c > b > 0 and endpoint exponent
lam = c - a - b, argument z in [0, 1].  Strategy:

  * z <= 1/2 : plain power series, geometric convergence (ratio <= 1/2);
  * z  > 1/2 : connection formula in w = 1 - z,
        F(z) = g1 * 2F1(a, b; 1-lam; w) + g2 * w**lam * 2F1(c-a, c-b; 1+lam; w),
    valid for noninteger lam, both series again converging geometrically;
  * z == 1   : finite only for lam > 0, where F(1) = g1.

Interpolation tables accelerate repeated evaluation.  A uniform
piecewise-linear table cannot be uniformly accurate near z = 1 when
lam in (0, 1) (the function is only Hoelder-lam there, so its curvature
blows up like (1-z)**(lam-2)); the table therefore switches to a short
truncated form of the connection formula on the last few subintervals,
which restores a uniform error bound at interpolation-lookup cost.

All functions are pure; tables are immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError

MAX_TERMS = 100_000
SERIES_RTOL = 1e-16


def gamma_fn(x: float) -> float:
    """Gamma function for positive real arguments."""
    if x <= 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


def beta_fn(a: float, b: float) -> float:
    """Beta function B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b) for a, b > 0."""
    if a <= 0 or b <= 0:
        raise DomainError(f"beta_fn requires positive arguments, got ({a}, {b})")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


@dataclass(frozen=True)
class HypParams:
    """Parameter triple (a, b; c) of a Gauss hypergeometric function.

    Requires c > b > 0 so the Euler integral representation holds; the
    endpoint exponent lam = c - a - b governs the behaviour as z -> 1.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.c > self.b > 0):
            raise DomainError(
                f"hypergeometric parameters need c > b > 0, got {self}"
            )

    @property
    def lam(self) -> float:
        return self.c - self.a - self.b


def _series_vec(a: float, b: float, c: float, z: np.ndarray) -> np.ndarray:
    """Power series sum_k (a)_k (b)_k / ((c)_k k!) z^k for |z| <= ~0.6."""
    total = np.ones_like(z)
    term = np.ones_like(z)
    for k in range(MAX_TERMS):
        term = term * (((a + k) * (b + k)) / ((c + k) * (k + 1.0))) * z
        total += term
        if np.all(np.abs(term) <= SERIES_RTOL * np.abs(total)):
            return total
    raise ConvergenceError(
        f"2F1 series did not converge within {MAX_TERMS} terms "
        f"(a={a}, b={b}, c={c}, max|z|={np.max(np.abs(z))})"
    )


def _series_scalar(a: float, b: float, c: float, z: float) -> float:
    total = 1.0
    term = 1.0
    for k in range(MAX_TERMS):
        term *= ((a + k) * (b + k)) / ((c + k) * (k + 1.0)) * z
        total += term
        if abs(term) <= SERIES_RTOL * abs(total):
            return total
    raise ConvergenceError(
        f"2F1 series did not converge within {MAX_TERMS} terms "
        f"(a={a}, b={b}, c={c}, z={z})"
    )


def _connection_constants(p: HypParams) -> tuple[float, float]:
    """Coefficients g1, g2 of the z -> 1-z connection formula."""
    lam = p.lam
    if abs(lam - round(lam)) < 1e-12:
        raise DomainError(
            f"connection formula degenerates at integer lam = {lam} ({p})"
        )
    g1 = math.gamma(p.c) * math.gamma(lam) / (
        math.gamma(p.c - p.a) * math.gamma(p.c - p.b)
    )
    g2 = math.gamma(p.c) * math.gamma(-lam) / (math.gamma(p.a) * math.gamma(p.b))
    return g1, g2


def hyp2f1_grid(p: HypParams, z: np.ndarray) -> np.ndarray:
    """Evaluate 2F1(a, b; c; z) on an array of points z in [0, 1]."""
    z = np.asarray(z, dtype=float)
    if z.size and (np.min(z) < 0.0 or np.max(z) > 1.0):
        raise DomainError("hyp2f1 argument must lie in [0, 1]")
    out = np.empty_like(z)
    lam = p.lam

    near = z > 0.5
    if np.any(~near):
        out[~near] = _series_vec(p.a, p.b, p.c, z[~near])
    if np.any(near):
        at_one = z == 1.0
        if np.any(at_one):
            if lam <= 0:
                raise DomainError(
                    f"2F1 diverges at z = 1 for lam = {lam} <= 0 ({p})"
                )
            g1, _ = _connection_constants(p)
            out[at_one] = g1
        inner = near & ~at_one
        if np.any(inner):
            g1, g2 = _connection_constants(p)
            w = 1.0 - z[inner]
            s1 = _series_vec(p.a, p.b, p.a + p.b - p.c + 1.0, w)
            s2 = _series_vec(p.c - p.a, p.c - p.b, lam + 1.0, w)
            out[inner] = g1 * s1 + g2 * np.power(w, lam) * s2
    return out


def hyp2f1_pair(p: HypParams, z: np.ndarray, omz: np.ndarray) -> np.ndarray:
    """Evaluate 2F1(a, b; c; z) given z and its exact complement omz = 1 - z.

    Callers that know 1 - z without cancellation (e.g. ratios (s-u)/s) get
    full accuracy near the endpoint, where the value is assembled from the
    connection series in omz directly.
    """
    z = np.asarray(z, dtype=float)
    omz = np.asarray(omz, dtype=float)
    out = np.empty_like(z)
    lam = p.lam

    low = z <= 0.5
    if np.any(low):
        out[low] = _series_vec(p.a, p.b, p.c, z[low])
    high = ~low
    if np.any(high):
        at_one = high & (omz == 0.0)
        if np.any(at_one):
            if lam <= 0:
                raise DomainError(f"2F1 diverges at z = 1 for lam = {lam} <= 0 ({p})")
            out[at_one] = _connection_constants(p)[0]
        inner = high & (omz > 0.0)
        if np.any(inner):
            g1, g2 = _connection_constants(p)
            w = omz[inner]
            s1 = _series_vec(p.a, p.b, p.a + p.b - p.c + 1.0, w)
            s2 = _series_vec(p.c - p.a, p.c - p.b, lam + 1.0, w)
            out[inner] = g1 * s1 + g2 * np.power(w, lam) * s2
        if np.any(high & (omz < 0.0)):
            raise DomainError("hyp2f1_pair needs omz >= 0")
    return out


def hyp2f1(p: HypParams, z: float) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for z in [0, 1]."""
    z = float(z)
    if not 0.0 <= z <= 1.0:
        raise DomainError("hyp2f1 argument must lie in [0, 1]")
    if z <= 0.5:
        return _series_scalar(p.a, p.b, p.c, z)
    lam = p.lam
    if z == 1.0:
        if lam <= 0:
            raise DomainError(f"2F1 diverges at z = 1 for lam = {lam} <= 0 ({p})")
        return _connection_constants(p)[0]
    g1, g2 = _connection_constants(p)
    w = 1.0 - z
    s1 = _series_scalar(p.a, p.b, p.a + p.b - p.c + 1.0, w)
    s2 = _series_scalar(p.c - p.a, p.c - p.b, lam + 1.0, w)
    return g1 * s1 + g2 * w**lam * s2


def _tail_coeffs(a: float, b: float, c: float, w_max: float) -> np.ndarray:
    """Series coefficients of 2F1(a, b; c; w), truncated for |w| <= w_max."""
    coeffs = [1.0]
    t = 1.0
    scale = max(w_max, 1e-12)
    for k in range(80):
        t = t * ((a + k) * (b + k)) / ((c + k) * (k + 1.0))
        coeffs.append(t)
        if abs(t) * scale ** (k + 1) < 1e-18:
            break
    return np.asarray(coeffs)


@dataclass(frozen=True)
class InterpolationTable:
    """Immutable accelerator for one hypergeometric parameter triple.

    grid_size equally spaced nodes on [0, 1] with piecewise-linear lookup;
    on (z_switch, 1] the lookup instead evaluates the truncated connection
    formula, so the recorded max deviation stays uniform up to the endpoint.
    """

    params: HypParams
    values: np.ndarray
    z_switch: float
    tail_g1: float
    tail_g2: float
    tail_lam: float
    tail_c1: np.ndarray
    tail_c2: np.ndarray
    max_dev: float = field(default=float("nan"))

    def __post_init__(self):
        object.__setattr__(self, "_scalar_fn", _build_scalar_lookup(self))

    @property
    def grid_size(self) -> int:
        return self.values.size

    @property
    def spacing(self) -> float:
        return 1.0 / (self.values.size - 1)

    def lookup_scalar(self, z: float) -> float:
        """Single-point lookup on the allocation-free Python fast path."""
        return self._scalar_fn(z)

    def lookup_pair(self, z: np.ndarray, omz: np.ndarray) -> np.ndarray:
        """Array lookup given z and its exact complement omz = 1 - z.

        The endpoint tail is formed from omz directly, so accuracy does not
        degrade when z carries rounding from 1 - omz.
        """
        z = np.asarray(z, dtype=float)
        omz = np.asarray(omz, dtype=float)
        out = np.empty_like(z)
        tail = omz < (1.0 - self.z_switch)
        head = ~tail
        if np.any(head):
            zh = z[head]
            if zh.size and (np.min(zh) < 0.0 or np.max(zh) > 1.0):
                raise DomainError("table lookup argument must lie in [0, 1]")
            pos = zh * (self.values.size - 1)
            idx = np.minimum(pos.astype(np.int64), self.values.size - 2)
            frac = pos - idx
            out[head] = self.values[idx] * (1.0 - frac) + self.values[idx + 1] * frac
        if np.any(tail):
            w = omz[tail]
            if np.min(w) < 0.0:
                raise DomainError("lookup_pair needs omz >= 0")
            s1 = _horner(self.tail_c1, w)
            s2 = _horner(self.tail_c2, w)
            out[tail] = self.tail_g1 * s1 + self.tail_g2 * np.power(w, self.tail_lam) * s2
        return out

    def lookup(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        if z.size and (np.min(z) < 0.0 or np.max(z) > 1.0):
            raise DomainError("table lookup argument must lie in [0, 1]")
        out = np.empty_like(z)
        head = z <= self.z_switch
        if np.any(head):
            pos = z[head] * (self.values.size - 1)
            idx = np.minimum(pos.astype(np.int64), self.values.size - 2)
            frac = pos - idx
            out[head] = self.values[idx] * (1.0 - frac) + self.values[idx + 1] * frac
        if np.any(~head):
            w = 1.0 - z[~head]
            s1 = _horner(self.tail_c1, w)
            s2 = _horner(self.tail_c2, w)
            out[~head] = self.tail_g1 * s1 + self.tail_g2 * np.power(w, self.tail_lam) * s2
        return out[0] if scalar else out

    def __call__(self, z) -> np.ndarray:
        return self.lookup(z)


def _horner(coeffs: np.ndarray, w: np.ndarray) -> np.ndarray:
    acc = np.full_like(w, coeffs[-1])
    for ck in coeffs[-2::-1]:
        acc = acc * w + ck
    return acc


def _build_scalar_lookup(table: "InterpolationTable"):
    """Bind table data into a closure; cell-variable access is the fastest
    per-call path CPython offers, which is what the accelerator exists for."""
    vals = table.values.tolist()
    top = len(vals) - 2
    scale = float(len(vals) - 1)
    z_switch = table.z_switch
    g1, g2, lam = table.tail_g1, table.tail_g2, table.tail_lam
    c1 = tuple(reversed(table.tail_c1.tolist()))
    c2 = tuple(reversed(table.tail_c2.tolist()))

    def lookup(z: float) -> float:
        if z > z_switch:
            if z > 1.0:
                raise DomainError("table lookup argument must lie in [0, 1]")
            w = 1.0 - z
            s1 = 0.0
            for ck in c1:
                s1 = s1 * w + ck
            s2 = 0.0
            for ck in c2:
                s2 = s2 * w + ck
            return g1 * s1 + g2 * w**lam * s2
        if z < 0.0:
            raise DomainError("table lookup argument must lie in [0, 1]")
        pos = z * scale
        idx = int(pos)
        if idx > top:
            idx = top
        v0 = vals[idx]
        return v0 + (vals[idx + 1] - v0) * (pos - idx)

    return lookup


def hyp2f1_table(
    p: HypParams,
    grid_size: int,
    tail_tol: float = 5e-8,
    refine_factor: int = 10,
    measure: bool = True,
) -> InterpolationTable:
    """Build an interpolation table for 2F1(a, b; c; .) on [0, 1].

    tail_tol sets the interpolation-error level at which the lookup hands
    over from the linear table to the truncated connection formula; the
    switch point is derived from the curvature of the (1-z)**lam endpoint
    term.  The tail never extends below z = 0.9, so coarse tables stay
    plain piecewise-linear over essentially the whole interval.
    """
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    lam = p.lam
    if lam <= 0:
        # Endpoint value needed for the node at z = 1.
        raise DomainError(f"table construction needs lam > 0, got lam = {lam}")
    g1, g2 = _connection_constants(p)

    nodes = np.linspace(0.0, 1.0, grid_size)
    values = hyp2f1_grid(p, nodes)

    spacing = 1.0 / (grid_size - 1)
    curv = abs(g2) * lam * (1.0 - lam) if lam < 1.0 else abs(g2)
    if curv > 0:
        w_star = (curv * spacing**2 / (8.0 * tail_tol)) ** (1.0 / (2.0 - lam))
    else:
        w_star = spacing
    w_star = max(w_star, spacing)
    # Snap the switch to a node so the linear region only uses full cells.
    i_switch = int(math.floor((1.0 - w_star) / spacing))
    z_switch = max(0.9, i_switch * spacing)
    w_max = 1.0 - z_switch

    c1 = _tail_coeffs(p.a, p.b, p.a + p.b - p.c + 1.0, w_max)
    c2 = _tail_coeffs(p.c - p.a, p.c - p.b, lam + 1.0, w_max)

    table = InterpolationTable(
        params=p,
        values=values,
        z_switch=z_switch,
        tail_g1=g1,
        tail_g2=g2,
        tail_lam=lam,
        tail_c1=c1,
        tail_c2=c2,
    )
    if measure:
        fine = np.linspace(0.0, 1.0, refine_factor * (grid_size - 1) + 1)
        dev = float(np.max(np.abs(table.lookup(fine) - hyp2f1_grid(p, fine))))
        object.__setattr__(table, "max_dev", dev)
    return table
