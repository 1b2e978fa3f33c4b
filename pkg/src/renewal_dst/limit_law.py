"""The limit law of scaled lifetime sums and its discretized family.

The scaled partial sums of the DST lifetime family converge to the random
series S = sum_{k>=1} 2^(-k) Z_k with i.i.d. unit exponentials Z_k,
equivalently a convolution of Exp(2^k) laws. Partial fractions turn that
convolution into a signed mixture

    L(S) = sum_{k>=1} a_k Exp(2^k),
    a_k  = b * prod_{j=1}^{k-1} (1 - 2^j)^(-1),
    b    = prod_{j>=1} (1 - 2^(-j))^(-1),

whose coefficients alternate in sign and decay like 2^(-k(k-1)/2). All CDF,
pmf and tail evaluations here are series over that mixture. Signed series
with coefficients up to |b| ~ 3.46 cancel catastrophically near 0, so every
CDF-like quantity is evaluated termwise through expm1 and summed exactly with
math.fsum; tails are never formed as 1 - cdf.

The discretized family is Q_eta = L(floor(-log2 S + eta)) for eta in [0, 1]:

    P(Q_eta <= x) = sum_k a_k exp(-2^(k + eta - 1 - x)),  x integer.

The two endpoints are translates: Q_1({j}) = Q_0({j-1}), and the series
reproduces that identity exactly in floating point because the exponents
k + 1 - 1 - x and k - 1 - (x - 1) are the same float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

COEFF_EPS = 1e-18     # series truncation threshold for coefficients
MAX_TERMS = 64        # hard cap; |a_k| underflows long before this
DEFAULT_TERMS = 32    # default mixture order, already past float64 precision

# exp(-2^w) underflows to 0.0 well before w reaches this; guarding here also
# keeps 2.0**w itself from overflowing for extreme integer arguments
_EXP_CUTOFF = 60.0


@lru_cache(maxsize=1)
def euler_b() -> float:
    """The normalizer b = prod_{j>=1} (1 - 2^(-j))^(-1) ~ 3.4627466194550636.

    Factors are multiplied until they differ from 1 by less than 1e-18
    (j = 59 in binary64); the result is deterministic.
    """
    denom = 1.0
    j = 1
    while 2.0 ** -j >= COEFF_EPS:
        denom *= 1.0 - 2.0 ** -j
        j += 1
    return 1.0 / denom


@dataclass(frozen=True)
class SignedExpMixture:
    """Signed coefficients a_1..a_K against rates 2^1..2^K.

    Not a probability mixture: signs strictly alternate starting positive,
    |a_{k+1}| / |a_k| = 1/(2^k - 1), and the coefficients sum to 1.
    """

    coeffs: tuple[float, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("mixture needs at least one coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def rates(self) -> tuple[float, ...]:
        return tuple(2.0 ** k for k in range(1, len(self.coeffs) + 1))

    def effective(self, eps: float = COEFF_EPS) -> "SignedExpMixture":
        """Truncate to the leading terms with |a_k| >= eps (at least one)."""
        keep = len(self.coeffs)
        for i, a in enumerate(self.coeffs):
            if abs(a) < eps:
                keep = max(i, 1)
                break
        return SignedExpMixture(self.coeffs[:keep])


def mixture_coefficients(order: int = DEFAULT_TERMS) -> SignedExpMixture:
    """Build a_1..a_order by the recurrence a_1 = b, a_{k+1} = a_k / (1 - 2^k)."""
    if not 1 <= order <= MAX_TERMS:
        raise ValueError(f"order must be in [1, {MAX_TERMS}], got {order}")
    a = [euler_b()]
    for k in range(1, order):
        a.append(a[-1] / (1.0 - 2.0 ** k))
    return SignedExpMixture(tuple(a))


@lru_cache(maxsize=1)
def _default_mixture() -> SignedExpMixture:
    return mixture_coefficients(DEFAULT_TERMS)


@dataclass(frozen=True)
class LimitLaw:
    """One member Q_eta of the discretized limit family."""

    eta: float
    mixture: SignedExpMixture

    def cdf(self, x: int) -> float:
        return q_cdf(self.eta, x, self.mixture)

    def pmf(self, j: int) -> float:
        return q_pmf(self.eta, j, self.mixture)

    def tail(self, j: int) -> float:
        return q_tail(self.eta, j, self.mixture)


def limit_law(eta: float, order: int = DEFAULT_TERMS) -> LimitLaw:
    _check_eta(eta)
    return LimitLaw(eta, mixture_coefficients(order))


def partial_fraction_coefficients(n: int) -> np.ndarray:
    """Coefficients a_{n,1}..a_{n,n} of the n-fold convolution expansion.

    Exp(2) * ... * Exp(2^n) = sum_k a_{n,k} Exp(2^k) with
    a_{n,k} = prod_{j=1}^{k-1} (1 - 2^j)^(-1) * prod_{j=1}^{n-k} (1 - 2^(-j))^(-1).
    The coefficients sum to 1 for every n.
    """
    if not 1 <= n <= 32:
        raise ValueError(f"n must be in [1, 32], got {n}")
    head = np.ones(n)   # head[k-1] = prod_{j<k} (1 - 2^j)^(-1)
    for k in range(1, n):
        head[k] = head[k - 1] / (1.0 - 2.0 ** k)
    tail = np.ones(n)   # tail[m] = prod_{j<=m} (1 - 2^(-j))^(-1)
    for m in range(1, n):
        tail[m] = tail[m - 1] / (1.0 - 2.0 ** -m)
    return head * tail[::-1]


def _check_eta(eta: float) -> None:
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")


def _cdf_scalar(t: float, coeffs: tuple[float, ...]) -> float:
    terms = [a * -math.expm1(-(2.0 ** k) * t)
             for k, a in enumerate(coeffs, start=1)]
    return min(max(math.fsum(terms), 0.0), 1.0)


def s_infinity_cdf(t, mixture: SignedExpMixture | None = None):
    """P(S <= t) = sum_k a_k (1 - exp(-2^k t)), clamped to [0, 1].

    Termwise expm1 keeps the alternating sum accurate near t = 0, where the
    true value decays superexponentially: P(S <= 2^(-j)) <= 2^(-j(j-1)/2).
    Accepts scalars or arrays.
    """
    mix = mixture or _default_mixture()
    if np.ndim(t) == 0:
        t = float(t)
        if t < 0 or math.isnan(t):
            raise ValueError(f"t must be >= 0, got {t!r}")
        return _cdf_scalar(t, mix.coeffs)
    tv = np.asarray(t, dtype=float)
    if np.any(tv < 0):
        raise ValueError("t must be >= 0")
    out = np.zeros_like(tv)
    for k, a in enumerate(mix.effective().coeffs, start=1):
        out += a * -np.expm1(-(2.0 ** k) * tv)
    return np.clip(out, 0.0, 1.0)


def s_infinity_sf(x: float, mixture: SignedExpMixture | None = None) -> float:
    """Upper tail P(S > x) = sum_k a_k exp(-2^k x), stable for large x."""
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x!r}")
    mix = mixture or _default_mixture()
    terms = [a * math.exp(-(2.0 ** k) * x)
             for k, a in enumerate(mix.coeffs, start=1)]
    return min(max(math.fsum(terms), 0.0), 1.0)


def exp_convolution_cdf(n: int, t):
    """CDF of Exp(2) + Exp(4) + ... + Exp(2^n) via the signed expansion."""
    a = partial_fraction_coefficients(n)
    if np.ndim(t) == 0:
        if t < 0:
            raise ValueError(f"t must be >= 0, got {t!r}")
        terms = [a[k - 1] * -math.expm1(-(2.0 ** k) * float(t))
                 for k in range(1, n + 1)]
        return min(max(math.fsum(terms), 0.0), 1.0)
    tv = np.asarray(t, dtype=float)
    if np.any(tv < 0):
        raise ValueError("t must be >= 0")
    out = np.zeros_like(tv)
    for k in range(1, n + 1):
        out += a[k - 1] * -np.expm1(-(2.0 ** k) * tv)
    return np.clip(out, 0.0, 1.0)


def q_cdf(eta: float, x, mixture: SignedExpMixture | None = None) -> float:
    """P(Q_eta <= x) = sum_k a_k exp(-2^(k + eta - 1 - x)) for integer x.

    Real x is answered at floor(x); the law is integer-supported. Below the
    median the direct series has no cancellation; above it the value is
    formed as 1 minus the stably evaluated tail, which keeps the CDF
    monotone in floating point all the way into the flat-at-1 region.
    """
    _check_eta(eta)
    mix = mixture or _default_mixture()
    x = math.floor(x)
    terms = []
    for k, a in enumerate(mix.coeffs, start=1):
        w = k + eta - 1.0 - x
        if w < _EXP_CUTOFF:
            terms.append(a * math.exp(-(2.0 ** w)))
    direct = min(max(math.fsum(terms), 0.0), 1.0)
    if direct <= 0.5:
        return direct
    return 1.0 - q_tail(eta, x + 1, mixture)


def q_pmf(eta: float, j, mixture: SignedExpMixture | None = None) -> float:
    """P(Q_eta = j), as the difference of adjacent CDF or tail values.

    Deep in the right tail both CDF values sit at 1 - tiny and their float
    difference is noise, so the difference is taken between the stably
    evaluated tails instead; both forms are floored at 0.
    """
    j = math.floor(j)
    left_cdf = q_cdf(eta, j - 1, mixture)
    if left_cdf > 0.5:
        return max(q_tail(eta, j, mixture) - q_tail(eta, j + 1, mixture), 0.0)
    return max(q_cdf(eta, j, mixture) - left_cdf, 0.0)


def q_tail(eta: float, j, mixture: SignedExpMixture | None = None) -> float:
    """P(Q_eta >= j), evaluated as P(S <= 2^(eta - j)) in complement form.

    Going through the expm1 series rather than 1 - cdf keeps relative
    accuracy in the far right tail, which decays like exp(-j^2 log2 / 2).
    """
    _check_eta(eta)
    j = math.floor(j)
    e = eta - j
    t = 2.0 ** e if e < 1024 else math.inf
    return s_infinity_cdf(t, mixture)


def sample_s_infinity(rng: np.random.Generator, k_trunc: int = 64,
                      size: int | None = None):
    """Draw S ~ sum_{k=1}^{k_trunc} 2^(-k) Z_k, Z_k i.i.d. Exp(1).

    The discarded remainder has mean 2^(-k_trunc), far below sampling noise
    at the default truncation.
    """
    if k_trunc < 1:
        raise ValueError(f"k_trunc must be >= 1, got {k_trunc}")
    if size is None:
        return math.fsum(2.0 ** -k * rng.standard_exponential()
                         for k in range(1, k_trunc + 1))
    out = np.zeros(size)
    for k in range(1, k_trunc + 1):
        out += 2.0 ** -k * rng.standard_exponential(size)
    return out


def sample_q(eta: float, rng: np.random.Generator, size: int | None = None,
             k_trunc: int = 64):
    """Draw floor(-log2 S + eta); eta = 1 goes through the translate identity."""
    _check_eta(eta)
    if eta == 1.0:
        return sample_q(0.0, rng, size, k_trunc) + 1
    s = sample_s_infinity(rng, k_trunc, size)
    v = np.floor(-np.log2(s) + eta)
    if size is None:
        return int(v)
    return v.astype(np.int64)
