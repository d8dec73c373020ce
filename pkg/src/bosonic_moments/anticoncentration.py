"""Outcome-collision probability P2(m, n) and the anti-concentration bound.

P2 is the basis-size-normalized average collision probability of the output
distribution of a Fock-state sampler: 1 for the uniform distribution, up to
|Phi| for a point mass.  Four independent routes are provided: an exact
hypergeometric closed form, an exact alternating-binomial (Beta-moment)
form, an oscillatory-integral quadrature, and a Monte-Carlo estimate over
Haar draws.  The asymptotic laws (m/n + 1, the Dawson-constant times n, and
n) cover the saturated, quadratic and dilute mode scalings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .combinatorics import (
    basis_size,
    binomial,
    collision_free_ratio,
    enumerate_basis,
    hyp2f1_terminating,
    pochhammer,
)
from .interferometer import amplitude_batch, haar_stack, rng_stream
from .moments import MomentEstimate, merge_welford, _batch_welford, _shard
from .combinatorics import collision_free_occupation

REGIMES = ("dilute", "quadratic", "intermediate", "linear", "degenerate")

#: ln(m)/ln(n) bands for the finite-size regime call.  The regimes are
#: asymptotic statements; these cutoffs are the documented desk-scale
#: convention (m = 2n sits at exponent 1.18 for n = 50, hence the 1.2 cut).
LINEAR_MAX_EXPONENT = 1.2
INTERMEDIATE_MAX_EXPONENT = 1.85
QUADRATIC_MAX_EXPONENT = 2.15
MIN_CLASSIFIABLE_PHOTONS = 5

#: Above this photon number the default evaluation path switches from exact
#: rationals to the integral form with tightened tolerance.
EXACT_PATH_MAX_PHOTONS = 300

_QUAD_ORDER = 16


class QuadratureError(RuntimeError):
    """Composite quadrature failed to reach the requested tolerance."""


def p2_closed(m: int, n: int) -> Fraction:
    """Exact P2: sum_k (m+k-1)_k / (m+n)_k * 2F1(-k, n-k+1; 2-m-2k; -1).

    m = 1 has a single outcome, so P2 = 1 by convention (callers flag the
    regime as degenerate).
    """
    _check_sector(m, n)
    if m == 1:
        return Fraction(1)
    total = Fraction(0)
    for k in range(n + 1):
        prefactor = Fraction(pochhammer(m + k - 1, k), pochhammer(m + n, k))
        total += prefactor * hyp2f1_terminating(k, n - k + 1, 2 - m - 2 * k, -1)
    return total


def p2_beta(m: int, n: int) -> Fraction:
    """Exact P2 through the alternating-binomial block sums.

    T_k = sum_j (-1)^j C(k, j) (n-k+1)_j (m+k-1)_(k-j) / (m+n)_k; each T_k
    is the k-th moment E[(1-2X)^k] of a Beta(n-k+1, m+k-1) variable and the
    total must agree with p2_closed term by term.
    """
    _check_sector(m, n)
    if m == 1:
        return Fraction(1)
    total = Fraction(0)
    for k in range(n + 1):
        denom = pochhammer(m + n, k)
        term = Fraction(0)
        for j in range(k + 1):
            sign = -1 if j % 2 else 1
            term += Fraction(
                sign * binomial(k, j) * pochhammer(n - k + 1, j) * pochhammer(m + k - 1, k - j),
                denom,
            )
        total += term
    return total


def _gauss_legendre_panels(integrand, a: float, b: float, panels: int) -> tuple[float, float]:
    """Composite rule value plus the L1 sum of panel contributions.

    The L1 magnitude bounds the cancellation between oscillation
    half-periods and hence the roundoff floor of the composite sum.
    """
    nodes, weights = np.polynomial.legendre.leggauss(_QUAD_ORDER)
    edges = np.linspace(a, b, panels + 1)
    half = np.diff(edges) / 2.0
    centers = (edges[:-1] + edges[1:]) / 2.0
    points = centers[:, None] + half[:, None] * nodes[None, :]
    values = integrand(points.ravel()).reshape(points.shape)
    contributions = half * (values @ weights)
    return float(np.sum(contributions)), float(np.sum(np.abs(contributions)))


def p2_integral(m: int, n: int, tolerance: float = 1e-10) -> float:
    """P2 via (n+m-1) * integral_0^{pi/2} cos^(n+m-2)(t) sin((n+1) t) dt.

    Composite Gauss-Legendre (order 16 per panel, at least one panel per
    oscillation half-period, default panel count max(8, 2(n+1))).  For very
    large n+m the integrand is a sharp peak at the origin; the domain is
    then truncated where cos^(n+m-2) is negligible and panels are budgeted
    against both the peak width and the oscillation.  Panel counts double
    until two refinements agree within the tolerance.
    """
    _check_sector(m, n)
    if m + n < 2:
        raise ValueError(f"integral form needs m + n >= 2, got m={m}, n={n}")
    power = n + m - 2
    scale = n + m - 1

    def integrand(theta: np.ndarray) -> np.ndarray:
        # cos(t)^power as exp(power * log cos t) with log cos t computed via
        # log1p(-2 sin^2(t/2)): stable where the peak is sharp (huge powers)
        with np.errstate(divide="ignore"):
            log_cos = np.log1p(-2.0 * np.sin(theta / 2.0) ** 2)
        return np.exp(power * log_cos) * np.sin((n + 1) * theta)

    upper = math.pi / 2
    if power > 0:
        # beyond theta*, cos^power < e^-70: invisible next to P2 >= 1
        upper = min(upper, math.sqrt(140.0 / power))
    panels = max(8, 2 * (n + 1))
    if upper < math.pi / 2:
        oscillations = (n + 1) * upper / math.pi
        panels = max(32, 4 * math.ceil(oscillations) + 16)

    previous = None
    for _ in range(8):
        raw, raw_l1 = _gauss_legendre_panels(integrand, 0.0, upper, panels)
        value = scale * raw
        # tolerance is honored down to the roundoff floor of the composite
        # sum; the oscillatory panels cancel, so the floor scales with their
        # L1 magnitude rather than with the result
        floor = 128.0 * np.finfo(float).eps * scale * raw_l1
        if previous is not None and abs(value - previous) <= 0.5 * max(tolerance, floor):
            return value
        previous = value
        panels *= 2
    raise QuadratureError(
        f"integral form did not reach tolerance {tolerance:g} at (m={m}, n={n})"
    )


def mc_p2(m: int, n: int, samples: int, seed: int, jobs: int = 1) -> MomentEstimate:
    """Monte-Carlo P2: per Haar draw, |Phi| * sum over all outcomes of p^2.

    Needs |Phi| permanent evaluations per sample, so photon numbers above 10
    are refused.  Deterministic for fixed (seed, samples, jobs).
    """
    _check_sector(m, n)
    if samples < 100:
        raise ValueError(f"need at least 100 samples, got {samples}")
    if n > 10:
        raise ValueError("Monte-Carlo P2 is guarded to n <= 10 (permanent cost)")
    if m == 1:
        return MomentEstimate(1.0, 0.0, 0.0, samples)
    if n > m:
        raise ValueError("the collision-free input state needs n <= m")
    basis = enumerate_basis(m, n)
    cf_input = collision_free_occupation(m, n)
    d = basis.size

    def run_worker(worker: int, count: int) -> tuple[int, float, float]:
        rng = rng_stream(seed, worker)
        acc = (0, 0.0, 0.0)
        done = 0
        while done < count:
            batch = min(5_000, count - done)
            mats = haar_stack(m, batch, rng)
            collision = np.zeros(batch)
            for occ in basis:
                probs = np.abs(amplitude_batch(mats, cf_input, occ)) ** 2
                collision += probs**2
            acc = merge_welford(acc, _batch_welford(d * collision))
            done += batch
        return acc

    counts = _shard(samples, max(1, jobs))
    if len(counts) == 1:
        total = run_worker(0, counts[0])
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=len(counts)) as pool:
            parts = list(pool.map(run_worker, range(len(counts)), counts))
        total = (0, 0.0, 0.0)
        for part in parts:
            total = merge_welford(total, part)
    return MomentEstimate.from_welford(*total)


_DAWSON_SERIES_CUTOFF = 7.0


def dawson(y: float) -> float:
    """Dawson integral D(y) = exp(-y^2) * integral_0^y exp(t^2) dt.

    Below |y| = 7 the positive-term series exp(-y^2) sum y^(2j+1)/(j!(2j+1))
    is used (no cancellation, every term positive); above it the asymptotic
    expansion 1/(2y) sum (2j-1)!!/(2y^2)^j, truncated at machine precision.
    Both branches hold 1e-12 relative accuracy, which is what forces the
    crossover this high: the asymptotic tail cannot reach that accuracy for
    smaller arguments in double precision.  Extended to y < 0 by oddness.
    """
    if y < 0:
        return -dawson(-y)
    if y == 0.0:
        return 0.0
    if y < _DAWSON_SERIES_CUTOFF:
        term = y
        total = y
        j = 0
        while True:
            j += 1
            term *= y * y / j
            contribution = term / (2 * j + 1)
            total += contribution
            if contribution < 1e-18 * total:
                break
        return math.exp(-y * y) * total
    inv2y2 = 1.0 / (2.0 * y * y)
    term = 1.0
    total = 1.0
    j = 0
    while True:
        j += 1
        new_term = term * (2 * j - 1) * inv2y2
        if new_term >= term:  # asymptotic tail started growing
            break
        term = new_term
        total += term
        if term < 1e-18 * total:
            break
    return total / (2.0 * y)


def asymptote(m: int, n: int, c: float, beta_exp: float) -> float:
    """Predicted large-n limit of P2 along the family m = round(c * n^beta).

    beta < 2 (saturated and intermediate): m/n + 1.  beta = 2 (quadratic):
    sqrt(2c) D(1/sqrt(2c)) n.  beta > 2 (dilute): n.
    """
    if beta_exp < 1:
        raise ValueError(f"mode-scaling exponent must be >= 1, got {beta_exp}")
    expected_m = round(c * n**beta_exp)
    if expected_m != m:
        raise ValueError(
            f"inconsistent family: m={m} but round({c} * {n}^{beta_exp}) = {expected_m}"
        )
    if abs(beta_exp - 2.0) < 1e-9:
        root = math.sqrt(2.0 * c)
        return root * dawson(1.0 / root) * n
    if beta_exp < 2.0:
        return m / n + 1.0
    return float(n)


def regime(m: int, n: int) -> str:
    """Finite-size regime label from the effective exponent ln(m)/ln(n).

    Returns "degenerate" for m = 1 (single outcome) and for n below
    MIN_CLASSIFIABLE_PHOTONS, where the asymptotic label is meaningless.
    Exponents below the linear band (m sublinear in n) also map to
    "linear": collisions only get more prevalent there.
    """
    if m < 1 or n < 1:
        raise ValueError(f"need m, n >= 1, got ({m}, {n})")
    if m == 1 or n < MIN_CLASSIFIABLE_PHOTONS:
        return "degenerate"
    exponent = math.log(m) / math.log(n)
    if exponent < LINEAR_MAX_EXPONENT:
        return "linear"
    if exponent < INTERMEDIATE_MAX_EXPONENT:
        return "intermediate"
    if exponent <= QUADRATIC_MAX_EXPONENT:
        return "quadratic"
    return "dilute"


def regime_detail(m: int, n: int) -> tuple[str, float, Fraction]:
    """Regime label together with the effective exponent and the exact
    fraction of collision-free configurations."""
    label = regime(m, n)
    exponent = math.log(m) / math.log(n) if (n > 1 and m > 1) else float("nan")
    return label, exponent, collision_free_ratio(m, n)


def pz_bound(m: int, n: int, alpha: float) -> float:
    """Paley-Zygmund lower bound (1-alpha)^2 / P2 on Pr[p >= alpha/|Phi|]."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return (1.0 - alpha) ** 2 / float(p2_closed(m, n))


def _check_sector(m: int, n: int):
    if m < 1:
        raise ValueError(f"mode count must be >= 1, got {m}")
    if n < 0:
        raise ValueError(f"photon number must be >= 0, got {n}")


def _report_asymptote(m: int, n: int, regime_label: str) -> float:
    if m == 1:
        return 1.0
    if regime_label == "dilute":
        return float(n)
    if regime_label == "quadratic":
        c = m / n**2
        root = math.sqrt(2.0 * c)
        return root * dawson(1.0 / root) * n
    return m / n + 1.0


@dataclass(frozen=True)
class P2Report:
    """P2 for one (m, n) by every computed route, plus the asymptotic context."""

    m: int
    n: int
    p2_closed: Optional[Fraction]
    p2_beta: Optional[Fraction]
    p2_integral: float
    p2_mc: Optional[MomentEstimate]
    asymptote: float
    regime: str
    method: str  # route that produced the headline value

    @property
    def p2(self) -> Union[Fraction, float]:
        if self.method == "closed" and self.p2_closed is not None:
            return self.p2_closed
        if self.method == "beta" and self.p2_beta is not None:
            return self.p2_beta
        if self.method == "mc" and self.p2_mc is not None:
            return self.p2_mc.mean
        return self.p2_integral

    @property
    def is_exact(self) -> bool:
        return self.method in ("closed", "beta")

    def pz_bound(self, alpha: float) -> float:
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        return (1.0 - alpha) ** 2 / float(self.p2)


def p2_report(
    m: int,
    n: int,
    method: str = "auto",
    samples: int = 10_000,
    seed: int = 0,
    jobs: int = 1,
) -> P2Report:
    """Assemble a cross-validated P2Report.

    method "auto" follows the documented path: exact rationals (closed +
    beta + integral cross-check) up to EXACT_PATH_MAX_PHOTONS photons, the
    integral form with tolerance 1e-12 above.  Forcing "closed", "beta",
    "integral" or "mc" picks the headline route; the exact pair and the
    integral are still computed on the exact path so the report invariants
    (closed == beta, integral within 1e-9 relative) are always validated
    when available.
    """
    _check_sector(m, n)
    if method not in ("auto", "closed", "beta", "integral", "mc"):
        raise ValueError(f"unknown method {method!r}")
    regime_label = "degenerate" if (m == 1 or n < 1) else regime(m, n)

    exact_path = (
        n <= EXACT_PATH_MAX_PHOTONS or method in ("closed", "beta")
    ) and method != "integral"
    closed = beta = None
    mc_estimate = None
    if exact_path:
        closed = p2_closed(m, n)
        beta = p2_beta(m, n)
        if closed != beta:
            raise AssertionError(
                f"exact route mismatch at (m={m}, n={n}): {closed} vs {beta}"
            )
    if m == 1:
        integral = 1.0
    else:
        integral = p2_integral(m, n, tolerance=1e-12 if not exact_path else 1e-10)
    if closed is not None:
        if abs(float(closed) - integral) > 1e-9 * float(closed):
            raise AssertionError(
                f"integral route disagrees with exact P2 at (m={m}, n={n}): "
                f"{float(closed)} vs {integral}"
            )
        d = basis_size(m, n)
        if not 1 <= closed <= d:
            raise AssertionError(f"P2 outside [1, |Phi|] at (m={m}, n={n}): {closed}")
    if method == "mc":
        mc_estimate = mc_p2(m, n, samples, seed, jobs)

    if method == "auto":
        headline = "closed" if exact_path else "integral"
    else:
        headline = method
    return P2Report(
        m=m,
        n=n,
        p2_closed=closed,
        p2_beta=beta,
        p2_integral=integral,
        p2_mc=mc_estimate,
        asymptote=_report_asymptote(m, n, regime_label),
        regime=regime_label,
        method=headline,
    )
