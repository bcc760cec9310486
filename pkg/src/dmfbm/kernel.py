"""Analytic kernel machinery for the drift-MLE Fredholm equation.

The weight function h that defines the drift estimator solves a
second-kind equation on (0, T),

    h(u) + c * int_0^T h(s) |u - s|**(gamma - 1) L(u, s) ds = g(u),

with gamma = 2*(h2 - h1) in (0, 1).  All model structure lives in the
bounded factor L, which on each wedge of the square factorizes through
five Gauss hypergeometric profiles of the coordinate ratio together with
one-dimensional singular integrals:

  * upper wedge u < s : profiles F1, F2 of z = u/s, endpoint integrals
    phi1, phi2 over (0, 1), and a three-part family lambda1..3 over (0, R)
    with R = (T - s)/(s - u);
  * lower wedge s < u : profiles F3, F4, F5 of z = s/u and a subtracted
    three-part family psi1..3 over (0, R) with R = (T - u)/(u - s).

L extends continuously to the diagonal; the shared limit ell has a closed
gamma-function form that doubles as a self-test of the special functions
(the identity a_diag = (b_diag + c_diag) * xi must hold to rounding).

Everything here is immutable after construction and safe to evaluate
concurrently.  Evaluators accept scalars or arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConsistencyError, DomainError
from .quadrature import QuadratureSpec, gauss_legendre_composite, tanh_sinh_rule
from .specfun import (
    HypParams,
    beta_fn,
    hyp2f1_pair,
    hyp2f1_table,
    InterpolationTable,
)

_CHUNK = 1024  # batch size for vectorized wedge evaluation (memory bound)


@dataclass(frozen=True)
class HurstPair:
    """Validated Hurst pair 1/2 < h1 < h2 < 1 with derived exponents.

    mode "strict" additionally requires h1 <= 3/4, the regime where the
    weight equation is known to have a unique solution; "relaxed" admits
    the full range on which the kernel factorization itself is valid.
    """

    h1: float
    h2: float
    mode: str = "strict"

    def __post_init__(self):
        if self.mode not in ("strict", "relaxed"):
            raise DomainError(f"unknown Hurst mode {self.mode!r}")
        if not (0.5 < self.h1 < self.h2 < 1.0):
            raise DomainError(
                f"need 1/2 < h1 < h2 < 1, got h1={self.h1}, h2={self.h2}"
            )
        if self.mode == "strict" and self.h1 > 0.75:
            raise DomainError(
                f"strict mode requires h1 <= 3/4, got h1={self.h1} "
                "(use mode='relaxed' to evaluate the kernel anyway)"
            )

    @property
    def alpha(self) -> float:
        return 2.0 * self.h2 - self.h1 - 0.5

    @property
    def beta(self) -> float:
        return 1.5 - 2.0 * self.h2 + self.h1

    @property
    def gamma(self) -> float:
        return 2.0 * (self.h2 - self.h1)


def hyp_param_triples(pair: HurstPair) -> tuple[HypParams, ...]:
    """Parameter triples of the five hypergeometric profiles F1..F5."""
    h1, h2 = pair.h1, pair.h2
    return (
        HypParams(2.0 - 2.0 * h2, 1.5 - h1, 3.0 - 2.0 * h1),
        HypParams(1.0 + 2.0 * h2 - 2.0 * h1, 1.5 - h1, 4.0 - 2.0 * h1),
        HypParams(h1 - 0.5, 1.5 - h1, 2.0 * h2 - h1 + 0.5),
        HypParams(2.0 * h2 - 2.0 * h1 + 1.0, 2.0 * h2 - 1.0, 2.0 * h2 - h1 + 1.5),
        HypParams(2.0 * h2 - 2.0 * h1, 2.0 * h2 - 1.0, 2.0 * h2 - h1 + 0.5),
    )


@dataclass(frozen=True)
class KernelConstants:
    """Closed-form constants of the kernel factorization.

    ell is the diagonal limit of L; a_diag, b_diag, c_diag and xi are the
    gamma/beta combinations entering it, tied together by the identity
    a_diag = (b_diag + c_diag) * xi.
    """

    c: float
    d1: float
    d2: float
    d3: float
    d4: float
    d5: float
    xi: float
    a_diag: float
    b_diag: float
    c_diag: float
    ell: float


def make_constants(pair: HurstPair, check_tol: float = 1e-8) -> KernelConstants:
    """Evaluate all closed-form constants and self-check the diagonal limit."""
    h1, h2 = pair.h1, pair.h2
    g = math.gamma

    c = (
        g(2.0 - 2.0 * h1)
        * math.cos(math.pi * (1.0 - h1))
        * h2
        * (2.0 * h2 - 1.0)
        / (math.pi * h1 * (2.0 * h1 - 1.0) * g(1.5 - h1) ** 2)
    )

    b_sym = beta_fn(1.5 - h1, 1.5 - h1)
    b_mix = beta_fn(1.5 - h1, 2.0 * h2 - 1.0)
    d1 = 2.0 * (1.0 - h1) * b_sym
    d2 = (1.0 - h2) * b_sym
    d3 = 2.0 * (h2 - h1) * b_mix
    d4 = (h1 - 0.5) * (1.5 - h1) / (2.0 * h2 - h1 + 0.5) * b_mix
    d5 = (h1 - 0.5) * b_mix

    # xi = (d3 + d5) - d5 * F5(1), with F5(1) from the endpoint formula.
    f5_at_1 = g(2.0 * h2 - h1 + 0.5) * g(1.5 + h1 - 2.0 * h2) / (
        g(h1 + 0.5) * g(1.5 - h1)
    )
    xi = (d3 + d5) - d5 * f5_at_1

    b_diag = (h1 - 0.5) * beta_fn(2.0 * h2 - h1 - 0.5, 1.0 + 2.0 * h1 - 2.0 * h2)
    c_diag = (1.5 + h1 - 2.0 * h2) * beta_fn(1.5 - h1, 1.0 + 2.0 * h1 - 2.0 * h2)
    a_diag = (
        g(1.5 - h1) ** 2
        * g(1.5 + h1 - 2.0 * h2)
        * g(2.0 * h2 - h1 - 0.5)
        / (g(2.0 - 2.0 * h2) * g(2.0 * h2 - 2.0 * h1))
    )
    rel = abs(a_diag - (b_diag + c_diag) * xi) / abs(a_diag)
    if rel > check_tol:
        raise ConsistencyError(
            f"diagonal-limit identity violated: |a-(b+c)xi|/|a| = {rel:.3e} "
            f"for {pair}"
        )
    ell = c_diag * xi
    return KernelConstants(c, d1, d2, d3, d4, d5, xi, a_diag, b_diag, c_diag, ell)


def g_rhs(u, pair: HurstPair, T: float):
    """Right-hand side g(u) = u^(1/2-h1) (T-u)^(1/2-h1) / (2 h1 B(3/2-h1, h1+1/2)).

    Applying the h1-covariance operator to g returns the constant 1 on
    (0, T); g diverges at both endpoints.
    """
    u_arr = np.asarray(u, dtype=float)
    if u_arr.size and (np.min(u_arr) <= 0.0 or np.max(u_arr) >= T):
        raise DomainError("g_rhs requires 0 < u < T")
    h1 = pair.h1
    norm = 2.0 * h1 * beta_fn(1.5 - h1, h1 + 0.5)
    out = np.power(u_arr, 0.5 - h1) * np.power(T - u_arr, 0.5 - h1) / norm
    return float(out) if np.ndim(u) == 0 else out


def _as_batch(*xs):
    arrs = [np.atleast_1d(np.asarray(x, dtype=float)) for x in xs]
    shape = np.broadcast_shapes(*(a.shape for a in arrs))
    return [np.broadcast_to(a, shape).ravel() for a in arrs], shape


@dataclass(frozen=True)
class KernelModel:
    """Evaluator bundle for one (Hurst pair, horizon) configuration.

    Hypergeometric profiles may be table-backed (default, matching the
    production solve path) or evaluated directly (validation runs).
    eps_diag is the half-width of the diagonal band on which L is replaced
    by its continuous limit ell.
    """

    hurst: HurstPair
    T: float
    consts: KernelConstants
    params: tuple[HypParams, ...]
    tables: Optional[tuple[InterpolationTable, ...]]
    quad: QuadratureSpec
    eps_diag: float

    @classmethod
    def build(
        cls,
        pair: HurstPair,
        T: float,
        use_tables: bool = True,
        table_size: int = 100_000,
        quad: QuadratureSpec = QuadratureSpec(),
        eps_diag: Optional[float] = None,
        measure_tables: bool = False,
    ) -> "KernelModel":
        if T <= 0:
            raise DomainError(f"horizon T must be positive, got {T}")
        params = hyp_param_triples(pair)
        tables = None
        if use_tables:
            tables = tuple(
                hyp2f1_table(p, table_size, measure=measure_tables) for p in params
            )
        return cls(
            hurst=pair,
            T=float(T),
            consts=make_constants(pair),
            params=params,
            tables=tables,
            quad=quad,
            eps_diag=1e-8 * T if eps_diag is None else eps_diag,
        )

    # -- hypergeometric profiles ------------------------------------------

    def _hyp(self, k: int, x, omx) -> np.ndarray:
        """2F1 of profile k at argument x, with omx = 1 - x exact."""
        if self.tables is not None:
            return self.tables[k - 1].lookup_pair(x, omx)
        return hyp2f1_pair(self.params[k - 1], x, omx)

    def F(self, k: int, z):
        """Profile F_k(z); F3 and F4 take hypergeometric argument 1 - z."""
        if k not in (1, 2, 3, 4, 5):
            raise DomainError(f"profile index must be 1..5, got {k}")
        z_arr = np.asarray(z, dtype=float)
        if z_arr.size and (np.min(z_arr) < 0.0 or np.max(z_arr) > 1.0):
            raise DomainError("profile argument must lie in [0, 1]")
        omz = 1.0 - z_arr
        if k in (3, 4):
            out = self._hyp(k, omz, z_arr)
        else:
            out = self._hyp(k, z_arr, omz)
        return float(out) if np.ndim(z) == 0 else out

    # -- wedge factors -----------------------------------------------------

    def psi(self, u, s):
        """Upper-wedge factor, defined for 0 < u < s < T."""
        (u_, s_), shape = _as_batch(u, s)
        self._check_order(u_, s_)
        h1, h2 = self.hurst.h1, self.hurst.h2
        cst = self.consts
        z = u_ / s_
        omz = (s_ - u_) / s_
        f1 = self._hyp(1, z, omz)
        f2 = self._hyp(2, z, omz)
        val = cst.d1 * np.power(u_, 1.0 - 2.0 * h1) * np.power(s_, 2.0 * h2 - 2.0) * f1
        val += (
            cst.d2
            * np.power(u_, 2.0 - 2.0 * h1)
            * np.power(s_, h1 - 1.5)
            * np.power(s_ - u_, 2.0 * h2 - h1 - 1.5)
            * f2
        )
        return self._unpack(val, shape, u, s)

    def rho(self, u, s):
        """Lower-wedge factor, defined for 0 < s < u < T."""
        (u_, s_), shape = _as_batch(u, s)
        self._check_order(s_, u_)
        h1, h2 = self.hurst.h1, self.hurst.h2
        a = self.hurst.alpha
        cst = self.consts
        z = s_ / u_
        omz = (u_ - s_) / u_
        f3 = self._hyp(3, omz, z)
        f4 = self._hyp(4, omz, z)
        f5 = self._hyp(5, z, omz)
        diff = u_ - s_
        val = np.power(diff, a - 1.0) * np.power(u_, -h1 - 0.5) * (
            cst.d3 * u_ + cst.d5 * s_
        ) * f3
        val += cst.d4 * np.power(u_, -2.0 * h2) * np.power(s_, a) * np.power(diff, a) * f4
        val -= cst.d5 * np.power(u_, 1.0 - 2.0 * h2) * np.power(s_, a) * np.power(
            diff, a - 1.0
        ) * f5
        return self._unpack(val, shape, u, s)

    # -- endpoint integrals over (0, 1) -------------------------------------

    def phi12(self, z):
        """Bounded profiles (phi1, phi2) of the upper-wedge subtraction
        integral, z in [0, 1]."""
        (z_,), shape = _as_batch(z)
        if z_.size and (np.min(z_) < 0.0 or np.max(z_) > 1.0):
            raise DomainError("phi12 argument must lie in [0, 1]")
        omz = 1.0 - z_
        p1, p2 = self._phi12_core(z_, omz)
        if np.ndim(z) == 0:
            return float(p1[0]), float(p2[0])
        return p1.reshape(shape), p2.reshape(shape)

    def _phi12_core(self, z: np.ndarray, omz: np.ndarray):
        h1 = self.hurst.h1
        a = self.hurst.alpha
        y, dist, w = tanh_sinh_rule(self.quad.ts_step, self.quad.ts_tmax_sub)
        omy = np.where(y >= 0.5, dist, 1.0 - y)  # exact 1 - y
        zB = z[:, None]
        omzB = omz[:, None]
        z_y = zB + omzB * y[None, :]
        om_zy = omzB * omy[None, :]  # exact 1 - z_y
        ypow = w * np.power(y, -h1 - 0.5)
        f1_z = self._hyp(1, z, omz)[:, None]
        f1_zy = self._hyp(1, z_y, om_zy)
        phi1 = np.sum(ypow[None, :] * (f1_z - f1_zy), axis=1)
        f2_z = self._hyp(2, z, omz)[:, None]
        f2_zy = self._hyp(2, z_y, om_zy)
        integ = zB * f2_z - z_y * np.power(omy, a - 1.0)[None, :] * f2_zy
        phi2 = np.sum(ypow[None, :] * integ, axis=1)
        return phi1, phi2

    # -- subtracted families over (0, R) ------------------------------------

    def psi_parts(self, z, R):
        """Lower-wedge integral family (psi1, psi2, psi3) at (z, R)."""
        (z_, R_), shape = _as_batch(z, R)
        self._check_zr(z_, R_)
        out = self._psi_parts_core(z_, 1.0 - z_, R_)
        if np.ndim(z) == 0 and np.ndim(R) == 0:
            return tuple(float(o[0]) for o in out)
        return tuple(o.reshape(shape) for o in out)

    def _psi_parts_core(self, z: np.ndarray, omz: np.ndarray, R: np.ndarray):
        h1, h2 = self.hurst.h1, self.hurst.h2
        a = self.hurst.alpha
        cst = self.consts

        f3_z = self._hyp(3, omz, z)
        f4_z = self._hyp(4, omz, z)
        f5_z = self._hyp(5, z, omz)
        lead3 = cst.d3 + cst.d5 * z

        acc = [np.zeros_like(z) for _ in range(3)]

        for x, wgt in self._range_nodes(R, self.quad.ts_tmax_sub):
            opx = 1.0 + x
            den = 1.0 + omz[:, None] * x
            z_x = z[:, None] / den
            om_zx = omz[:, None] * opx / den  # exact 1 - z_x
            f3_zx = self._hyp(3, om_zx, z_x)
            f4_zx = self._hyp(4, om_zx, z_x)
            f5_zx = self._hyp(5, z_x, om_zx)
            sing = wgt * np.power(x, -h1 - 0.5)
            q1 = np.power(opx, a - 1.0) * np.power(den, h1 - 0.5)
            # den exponent 2h1-2h2-1 comes from t**(2h1-1) * t**(-2h2) in the
            # substitution t = u + (u-s)x; verified against the brute-force
            # defining integral.
            q2 = np.power(opx, a) * np.power(den, 2.0 * h1 - 2.0 * h2 - 1.0)
            q3 = np.power(opx, a - 1.0) * np.power(den, 2.0 * h1 - 2.0 * h2)
            acc[0] += np.sum(
                sing * (lead3[:, None] * f3_z[:, None]
                        - q1 * (cst.d3 + cst.d5 * z_x) * f3_zx),
                axis=1,
            )
            acc[1] += np.sum(sing * (f4_z[:, None] - q2 * f4_zx), axis=1)
            acc[2] += np.sum(sing * (f5_z[:, None] - q3 * f5_zx), axis=1)

        za = np.power(z, a)
        return acc[0], cst.d4 * za * omz * acc[1], -cst.d5 * za * acc[2]

    def lambda_parts(self, z, R):
        """Upper-wedge integral family (lambda1, lambda2, lambda3) at (z, R)."""
        (z_, R_), shape = _as_batch(z, R)
        self._check_zr(z_, R_)
        out = self._lambda_parts_core(z_, 1.0 - z_, R_)
        if np.ndim(z) == 0 and np.ndim(R) == 0:
            return tuple(float(o[0]) for o in out)
        return tuple(o.reshape(shape) for o in out)

    def _lambda_parts_core(self, z: np.ndarray, omz: np.ndarray, R: np.ndarray):
        h1, h2 = self.hurst.h1, self.hurst.h2
        a = self.hurst.alpha
        cst = self.consts
        acc = [np.zeros_like(z) for _ in range(3)]

        for x, wgt in self._range_nodes(R):
            opx = 1.0 + x
            den = 1.0 + omz[:, None] * x
            y_x = 1.0 / den
            om_yx = omz[:, None] * x / den  # exact 1 - y_x
            f3 = self._hyp(3, om_yx, y_x)
            f4 = self._hyp(4, om_yx, y_x)
            f5 = self._hyp(5, y_x, om_yx)
            base = wgt * np.power(x, a - 1.0) * np.power(opx, -h1 - 0.5)
            acc[0] += np.sum(
                base
                * np.power(den, h1 - 1.5)
                * ((cst.d3 + cst.d5) + cst.d3 * omz[:, None] * x)
                * f3,
                axis=1,
            )
            acc[1] += np.sum(base * x * np.power(den, 2.0 * h1 - 2.0 * h2 - 1.0) * f4,
                             axis=1)
            acc[2] += np.sum(base * np.power(den, 2.0 * h1 - 2.0 * h2) * f5, axis=1)

        return acc[0], cst.d4 * omz * acc[1], -cst.d5 * acc[2]

    def _range_nodes(self, R: np.ndarray, ts_tmax: float | None = None):
        """Node/weight pairs covering (0, R) per batch entry.

        Head: tanh-sinh on (0, min(R, 1)).  Tail, where R > 1: composite
        Gauss-Legendre through x = R**t, exact for the smooth-in-log-x
        integrands.  Yields (x, weight) arrays of shape (batch, nodes).
        """
        xi, _, wi = tanh_sinh_rule(self.quad.ts_step,
                                   ts_tmax or self.quad.ts_tmax)
        a = np.minimum(R, 1.0)[:, None]
        yield a * xi[None, :], a * wi[None, :]

        if np.any(R > 1.0):
            t, wt = gauss_legendre_composite(self.quad.tail_panels,
                                             self.quad.tail_order)
            lnR = np.log(np.maximum(R, 1.0))[:, None]
            x = np.exp(t[None, :] * lnR)
            w = np.where(lnR > 0.0, x * lnR * wt[None, :], 0.0)
            yield x, w

    # -- assembled kernel factors -------------------------------------------

    def L(self, u, s):
        """Bounded kernel factor L(u, s) on (0, T)^2, diagonal band -> ell."""
        (u_, s_), shape = _as_batch(u, s)
        if u_.size and (
            np.min(u_) <= 0.0 or np.max(u_) >= self.T
            or np.min(s_) <= 0.0 or np.max(s_) >= self.T
        ):
            raise DomainError("L requires u, s in the open square (0, T)^2")
        out = np.empty_like(u_)
        for lo in range(0, u_.size, _CHUNK):
            sl = slice(lo, min(lo + _CHUNK, u_.size))
            out[sl] = self._L_chunk(u_[sl], s_[sl])
        return self._unpack(out, shape, u, s)

    def _L_chunk(self, u: np.ndarray, s: np.ndarray) -> np.ndarray:
        out = np.full_like(u, self.consts.ell)
        lower = s < u - self.eps_diag
        upper = s > u + self.eps_diag
        if np.any(lower):
            out[lower] = self._L_minus(u[lower], s[lower])
        if np.any(upper):
            out[upper] = self._L_plus(u[upper], s[upper])
        return out

    def _L_minus(self, u: np.ndarray, s: np.ndarray) -> np.ndarray:
        h1 = self.hurst.h1
        a = self.hurst.alpha
        cst = self.consts
        z = s / u
        omz = (u - s) / u
        R = (self.T - u) / (u - s)
        f3 = self._hyp(3, omz, z)
        f4 = self._hyp(4, omz, z)
        f5 = self._hyp(5, z, omz)
        za = np.power(z, a)
        bracket = (cst.d3 + cst.d5 * z) * f3 + cst.d4 * za * omz * f4 - cst.d5 * za * f5
        p1, p2, p3 = self._psi_parts_core(z, omz, R)
        return (
            np.power(self.T - u, 0.5 - h1) * np.power(u - s, h1 - 0.5) * bracket
            + (h1 - 0.5) * (p1 + p2 + p3)
        )

    def _L_plus(self, u: np.ndarray, s: np.ndarray) -> np.ndarray:
        h1, h2 = self.hurst.h1, self.hurst.h2
        cst = self.consts
        z = u / s
        omz = (s - u) / s
        R = (self.T - s) / (s - u)
        f1 = self._hyp(1, z, omz)
        f2 = self._hyp(2, z, omz)
        phi1, phi2 = self._phi12_core(z, omz)
        l1, l2, l3 = self._lambda_parts_core(z, omz, R)
        zm = np.power(z, 0.5 - h1)
        val = (
            cst.d1
            * np.power(u, 0.5 - h1)
            * np.power(s, 2.0 * h2 - 2.0)
            * np.power(s - u, self.hurst.beta)
            * (f1 + (h1 - 0.5) * phi1)
        )
        val += cst.d2 * np.power(z, 1.5 - h1) * f2
        val += (h1 - 0.5) * cst.d2 * zm * phi2
        val -= (h1 - 0.5) * zm * (l1 + l2 + l3)
        return val

    def K(self, u, s):
        """Full kernel K(u, s) = |u-s|**(gamma-1) L(u, s), u != s."""
        (u_, s_), shape = _as_batch(u, s)
        if np.any(u_ == s_):
            raise DomainError("K is singular on the diagonal u = s")
        val = np.power(np.abs(u_ - s_), self.hurst.gamma - 1.0) * self.L(u_, s_)
        return self._unpack(val, shape, u, s)

    def clamp(self, x, n: int):
        """Clamp coordinates into [1/n, T - 1/n] (kernel truncation)."""
        return np.clip(x, 1.0 / n, self.T - 1.0 / n)

    def L_truncated(self, n: int, u, s):
        """L evaluated at coordinates clamped into [1/n, T - 1/n]."""
        return self.L(self.clamp(u, n), self.clamp(s, n))

    def K_truncated(self, n: int, u, s):
        """|u-s|**(gamma-1) at the original coordinates times clamped L.

        The singular prefactor is never clamped; in the solver it is
        carried by the closed-form product-integration weights.
        """
        (u_, s_), shape = _as_batch(u, s)
        with np.errstate(divide="ignore"):
            pref = np.power(np.abs(u_ - s_), self.hurst.gamma - 1.0)
        val = pref * self.L_truncated(n, u_, s_)
        return self._unpack(val, shape, u, s)

    # -- endpoint-weighted transform ----------------------------------------

    def tilde_L(self, u, s):
        """Kernel factor of the constant-rhs formulation:
        L(u,s) * [u(T-u)]^(h1-1/2) / [s(T-s)]^(h1-1/2)."""
        (u_, s_), shape = _as_batch(u, s)
        h1 = self.hurst.h1
        ratio = np.power(u_ * (self.T - u_), h1 - 0.5) / np.power(
            s_ * (self.T - s_), h1 - 0.5
        )
        val = self.L(u_, s_) * ratio
        return self._unpack(val, shape, u, s)

    def tilde_L_truncated(self, n: int, u, s):
        return self.tilde_L(self.clamp(u, n), self.clamp(s, n))

    def tilde_rhs(self) -> float:
        """Constant right-hand side of the transformed equation."""
        h1 = self.hurst.h1
        return 1.0 / (2.0 * h1 * beta_fn(1.5 - h1, h1 + 0.5))

    def g(self, u):
        return g_rhs(u, self.hurst, self.T)

    # -- helpers -------------------------------------------------------------

    def _check_order(self, lo: np.ndarray, hi: np.ndarray):
        if lo.size and (
            np.min(lo) <= 0.0 or np.any(lo >= hi) or np.max(hi) >= self.T
        ):
            raise DomainError("arguments must satisfy 0 < first < second < T")

    @staticmethod
    def _check_zr(z: np.ndarray, R: np.ndarray):
        # z = 1 is admitted via the continuous extension of the families.
        if z.size and (np.min(z) <= 0.0 or np.max(z) > 1.0 or np.min(R) <= 0.0):
            raise DomainError("need z in (0, 1] and R > 0")

    @staticmethod
    def _unpack(val: np.ndarray, shape, *orig):
        if all(np.ndim(o) == 0 for o in orig):
            return float(val[0])
        return val.reshape(shape)
