"""Charlier and Krawtchouk polynomials with a float path and an exact-rational path.

Both families are terminating hypergeometric series.  The exact path works in
`fractions.Fraction` arithmetic and serves as the definitional oracle; the
float path is the production evaluator and uses a three-term recurrence run
over the *smaller* of (degree, argument), which keeps the wanted solution
dominant and the evaluation stable (the alternating series and the naive
degree-direction recurrence both lose digits once the argument outgrows the
parameter).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import NumericRangeError, ParameterError, TailBoundError

__all__ = [
    "CharlierParams",
    "KrawtchoukParams",
    "pochhammer",
    "hyp2f0_terminating",
    "charlier",
    "charlier_shift_residuals",
    "charlier_orthogonality_sum",
    "krawtchouk",
    "krawtchouk_norm_squared",
    "krawtchouk_normalized",
    "krawtchouk_orthogonality_sum",
]

_ORTHOGONALITY_HARD_CAP = 10**6


@dataclass(frozen=True)
class CharlierParams:
    """Poisson-weight parameter a > 0 (in the oscillator model a = gamma**2)."""

    a: float | Fraction

    def __post_init__(self):
        if not self.a > 0:
            raise ParameterError(f"Charlier parameter must be positive, got {self.a}")

    @property
    def is_exact(self) -> bool:
        return isinstance(self.a, Rational)


@dataclass(frozen=True)
class KrawtchoukParams:
    """Binomial-weight parameters: success probability p in (0,1), cutoff N >= 0."""

    p: float | Fraction
    N: int

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise ParameterError(f"Krawtchouk p must lie in (0,1), got {self.p}")
        if self.N < 0 or self.N != int(self.N):
            raise ParameterError(f"Krawtchouk N must be a nonnegative integer, got {self.N}")

    @property
    def is_exact(self) -> bool:
        return isinstance(self.p, Rational)


def _is_exact(value) -> bool:
    return isinstance(value, Rational)


def pochhammer(q, k: int):
    """Rising factorial (q)_k = q (q+1) ... (q+k-1).

    For a negative integer q = -m the product is zero whenever k > m; that
    case is returned explicitly so terminating series can rely on it.
    """
    if k < 0:
        raise ParameterError(f"pochhammer order must be nonnegative, got {k}")
    result = q**0  # 1 in the input's arithmetic
    for i in range(k):
        result *= q + i
        if result == 0:
            return result
    return result


def hyp2f0_terminating(n: int, x, z):
    """Terminating 2F0: sum_{k=0}^{n} (-n)_k (-x)_k z^k / k!.

    Termination comes from the (-n)_k factor, so `n` must be a nonnegative
    integer; `x` and `z` may be float, int or Fraction and the arithmetic
    follows the inputs.  Terms are accumulated with an incremental update of
    the running term, stopping early if a zero factor kills the tail.
    """
    if n < 0:
        raise ParameterError(f"series order must be nonnegative, got {n}")
    total = x * 0 + z * 0 + 1  # 1 in the promoted arithmetic
    term = total
    for k in range(n):
        term = term * (-n + k) * (-x + k) * z / (k + 1)
        if term == 0:
            break
        total = total + term
        if isinstance(total, float) and math.isinf(total):
            raise NumericRangeError(
                f"2F0 overflow at term {k + 1} for n={n}, x={x}, z={z}"
            )
    return total


def _charlier_recurrence(degree: int, argument, a):
    """C_degree(argument; a) by the three-term recurrence in the degree.

    Stable when |argument| is not small compared to the degree; callers
    arrange that via duality.
    """
    if degree == 0:
        return 1.0
    prev = 1.0
    cur = 1.0 - argument / a
    for m in range(1, degree):
        prev, cur = cur, ((m + a - argument) * cur - m * prev) / a
    if math.isinf(cur):
        raise NumericRangeError(
            f"Charlier recurrence overflow at degree {degree}, argument {argument}"
        )
    return cur


def charlier(n: int, x, params: CharlierParams):
    """Charlier polynomial C_n(x; a).

    Exact inputs (rational x and a) go through the definitional terminating
    series in Fraction arithmetic.  Float inputs use the recurrence; when x is
    a nonnegative integer the self-duality C_n(x;a) = C_x(n;a) lets the
    recurrence run over min(n, x) steps, which is the numerically stable
    ordering.
    """
    if n < 0:
        raise ParameterError(f"degree must be nonnegative, got {n}")
    a = params.a
    if _is_exact(x) and params.is_exact:
        return hyp2f0_terminating(n, Fraction(x), -1 / Fraction(a))
    a = float(a)
    xf = float(x)
    nearest = round(xf)
    # snap sqrt-roundoff (x = fl(sqrt(k))**2) onto the integer fast path;
    # the snap distance is far below the unit spacing of the support
    if nearest >= 0 and abs(xf - nearest) <= 1e-9 * max(1.0, abs(xf)):
        degree, argument = (n, int(nearest)) if n <= nearest else (int(nearest), n)
        return _charlier_recurrence(degree, float(argument), a)
    return _charlier_recurrence(n, xf, a)


def charlier_shift_residuals(n: int, x, params: CharlierParams):
    """Residuals of the two Charlier shift relations at (n, x).

    Returns (forward, backward) where

        forward  = C_n(x) - C_n(x-1) + (n/a) C_{n-1}(x-1)
        backward = C_n(x) - (x/a) C_n(x-1) - C_{n+1}(x)

    Both vanish identically; on the exact path the residuals are exactly 0.
    The forward relation needs n >= 1 and its slot is None for n = 0.
    """
    a = params.a
    backward = (
        charlier(n, x, params)
        - (x / a) * charlier(n, x - 1, params)
        - charlier(n + 1, x, params)
    )
    if n == 0:
        return None, backward
    forward = (
        charlier(n, x, params)
        - charlier(n, x - 1, params)
        + (Fraction(n) if params.is_exact else n) / a * charlier(n - 1, x - 1, params)
    )
    return forward, backward


def charlier_orthogonality_sum(m: int, n: int, params: CharlierParams, tail_eps: float = 1e-12):
    """Windowed discrete orthogonality sum sum_x (a^x/x!) C_m(x;a) C_n(x;a).

    The Poisson weight decays superexponentially; the window starts past the
    bulk at max(ceil(a) + 3*sqrt(a) + 10, 20) and extends until the current
    term falls below tail_eps with the geometric tail margin valid (x > 2a).
    Approximates a^{-n} e^a n! for m == n and 0 otherwise.
    """
    if tail_eps <= 0:
        raise ParameterError("tail_eps must be positive")
    a = float(params.a)
    # start checking only past the Poisson bulk and past the zeros of both
    # polynomials (largest Charlier zero is below a + deg + 2 sqrt(a deg) + O(1))
    x_floor = max(
        int(math.ceil(a) + 3 * math.sqrt(a)) + 10,
        20,
        m + n + int(2 * math.sqrt(a * (m + n + 1))) + 4,
    )
    total = 0.0
    log_w = 0.0  # log of a^x / x!
    x = 0
    small_streak = 0
    while True:
        cm = charlier(m, x, params) if params.is_exact else charlier(m, float(x), params)
        cn = charlier(n, x, params) if params.is_exact else charlier(n, float(x), params)
        term = math.exp(log_w) * float(cm) * float(cn)
        total += term
        # once past the bulk the weight ratio a/(x+1) < 1/2 dominates the
        # polynomial growth of C_m C_n, so the tail is bounded by a geometric
        # series under the last term; one small term can sit on a polynomial
        # zero, hence the streak requirement
        small_streak = small_streak + 1 if abs(term) * 2.0 < tail_eps else 0
        if x >= x_floor and x > 2 * a and small_streak >= 3:
            break
        x += 1
        if x > _ORTHOGONALITY_HARD_CAP:
            raise TailBoundError(
                f"orthogonality window exceeded hard cap {_ORTHOGONALITY_HARD_CAP}"
            )
        log_w += math.log(a) - math.log(x)
    return total


def krawtchouk(n: int, x, params: KrawtchoukParams):
    """Krawtchouk polynomial K_n(x; p, N), the terminating 2F1 at 1/p.

    K_n(x) = sum_{k=0}^{n} (-n)_k (-x)_k / ((-N)_k k!) (1/p)^k, valid for
    0 <= n <= N.  Rational inputs evaluate that series in Fraction
    arithmetic (the definitional oracle); the float path uses the
    three-term recurrence over the smaller of (n, x) -- Krawtchouk shares
    the self-duality K_n(x) = K_x(n) -- because the alternating sum sheds
    digits for N beyond ~20.
    """
    if not 0 <= n <= params.N:
        raise ParameterError(f"degree must satisfy 0 <= n <= N={params.N}, got {n}")
    p, N = params.p, params.N
    if params.is_exact and _is_exact(x):
        p = Fraction(p)
        x = Fraction(x)
        total = Fraction(1)
        term = total
        for k in range(n):
            term = term * (-n + k) * (-x + k) / ((-N + k) * (k + 1)) / p
            if term == 0:
                break
            total = total + term
        return total
    return _krawtchouk_recurrence(n, float(x), float(p), N)


def _krawtchouk_recurrence(n: int, x: float, p: float, N: int) -> float:
    nearest = round(x)
    if 0 <= nearest <= N and abs(x - nearest) <= 1e-9 * max(1.0, abs(x)):
        deg, arg = (n, float(int(nearest))) if n <= nearest else (int(nearest), float(n))
    else:
        deg, arg = n, x
    if deg == 0:
        return 1.0
    prev = 1.0
    cur = 1.0 - arg / (p * N)
    for m in range(1, deg):
        scale = p * (N - m)
        prev, cur = cur, ((scale + m * (1.0 - p) - arg) * cur - m * (1.0 - p) * prev) / scale
    return cur


def krawtchouk_norm_squared(n: int, params: KrawtchoukParams):
    """Squared orthonormalization constant d_n**2 = ((1-p)/p)^n / binom(N, n).

    This is the value making sum_x binom(N,x) p^x (1-p)^{N-x} K_n(x)^2 equal
    d_n**2 (verified against the exact brute-force sum in the test suite).
    Exact for rational p.
    """
    if not 0 <= n <= params.N:
        raise ParameterError(f"degree must satisfy 0 <= n <= N={params.N}, got {n}")
    p = Fraction(params.p) if params.is_exact else float(params.p)
    binom = math.comb(params.N, n)
    if params.is_exact:
        return ((1 - p) / p) ** n / binom
    return math.exp(n * (math.log1p(-p) - math.log(p)) - math.log(binom))


def krawtchouk_orthogonality_sum(m: int, n: int, params: KrawtchoukParams):
    """Exact finite sum sum_{x=0}^{N} binom(N,x) p^x (1-p)^{N-x} K_m(x) K_n(x).

    Brute-force oracle for the norm constant and for orthogonality; requires
    rational p so the result is an exact Fraction (delta_{mn} d_n^2).
    """
    if not params.is_exact:
        raise ParameterError("exact orthogonality sum needs a rational p")
    p = Fraction(params.p)
    N = params.N
    total = Fraction(0)
    for x in range(N + 1):
        w = math.comb(N, x) * p**x * (1 - p) ** (N - x)
        total += w * krawtchouk(m, x, params) * krawtchouk(n, x, params)
    return total


def krawtchouk_normalized(n: int, x: int, params: KrawtchoukParams) -> float:
    """Orthonormal Krawtchouk function: sqrt(weight(x)) K_n(x) / d_n.

    Satisfies sum_{x=0}^{N} Ktilde_m(x) Ktilde_n(x) = delta_{mn}.  The weight
    and norm factors are assembled in log space so large N (binomials near
    2^N) cannot overflow.
    """
    N = params.N
    if not 0 <= n <= N:
        raise ParameterError(f"degree must satisfy 0 <= n <= N={N}, got {n}")
    if not 0 <= x <= N or x != int(x):
        raise ParameterError(f"argument must be an integer in [0, N={N}], got {x}")
    p = float(params.p)
    log_weight = (
        math.lgamma(N + 1)
        - math.lgamma(x + 1)
        - math.lgamma(N - x + 1)
        + x * math.log(p)
        + (N - x) * math.log1p(-p)
    )
    log_dn = 0.5 * (n * (math.log1p(-p) - math.log(p)) - math.log(math.comb(N, n)))
    return math.exp(0.5 * log_weight - log_dn) * float(krawtchouk(n, float(x), params))
