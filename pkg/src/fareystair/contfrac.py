"""Continued fractions, convergents and continuants, with exact diophantine checks.

An irrational given by digits ``[a_1, ..., a_N]`` (a prefix of an infinite
expansion) is only ever handled through the exact open interval it is known
to lie in; no floating comparison decides a strict inequality here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import mpmath
import numpy as np

# Beyond this many bits a rule-generated denominator is continued in
# extended-exponent floating point instead of exact integers.
EXACT_BIT_LIMIT = 1 << 18

LIOUVILLE_SAFE_COUNT = 8


class EmptyDomainWarning(UserWarning):
    pass


class PartialQuotients:
    """Digits ``a_1, a_2, ...`` of a continued fraction in (0, 1).

    Either an explicit digit list or a rule ``rule(n, P_prev) -> a_n`` that
    produces the n-th digit from the previous denominator ``P_{n-1}``.  With
    ``finite=True`` the digits describe a rational number exactly; otherwise
    they are a prefix of an infinite expansion.
    """

    def __init__(self, digits: Iterable[int] = (), *, finite: bool = False,
                 rule: Optional[Callable] = None, name: str = ""):
        digits = tuple(int(a) for a in digits)
        if any(a < 1 for a in digits):
            raise ValueError("continued fraction digits must be >= 1")
        if rule is not None and finite:
            raise ValueError("a digit rule describes an infinite expansion")
        if finite:
            if not digits:
                raise ValueError("a finite continued fraction needs at least one digit")
            if len(digits) > 1 and digits[-1] == 1:
                digits = digits[:-2] + (digits[-2] + 1,)
        self._digits = list(digits)
        self.finite = finite
        self.rule = rule
        self.name = name

    def __repr__(self):
        tail = "" if self.finite else ", ..."
        shown = ", ".join(map(str, self._digits[:8]))
        more = ", ..." if len(self._digits) > 8 else ""
        label = f" {self.name}" if self.name else ""
        return f"PartialQuotients{label}([{shown}{more}{tail}])"

    def __eq__(self, other):
        if not isinstance(other, PartialQuotients):
            return NotImplemented
        return (self.finite == other.finite and self.rule is None and other.rule is None
                and self._digits == other._digits)

    def __hash__(self):
        return hash((tuple(self._digits), self.finite))

    @property
    def available(self) -> Optional[int]:
        """Number of digits available, None for an unbounded rule."""
        if self.rule is not None:
            return None
        return len(self._digits)

    @property
    def digits(self) -> tuple[int, ...]:
        return tuple(self._digits)

    def prefix(self, n: int) -> tuple[int, ...]:
        if n < 0:
            raise ValueError("n must be >= 0")
        if self.rule is not None:
            self._extend_exact(n)
        elif n > len(self._digits):
            raise ValueError(f"only {len(self._digits)} digits available, {n} requested")
        return tuple(self._digits[:n])

    def _extend_exact(self, n: int):
        if len(self._digits) >= n:
            return
        p_prev, p = 0, 1
        for a in self._digits:
            p_prev, p = p, a * p + p_prev
        while len(self._digits) < n:
            a = int(self.rule(len(self._digits) + 1, p))
            if a < 1:
                raise ValueError("digit rule produced a digit < 1")
            self._digits.append(a)
            p_prev, p = p, a * p + p_prev

    def __len__(self):
        if self.rule is not None:
            raise TypeError("rule-generated expansion has no fixed length")
        return len(self._digits)


def golden(n: int = 60) -> PartialQuotients:
    return PartialQuotients([1] * n, name="golden")


def silver(n: int = 60) -> PartialQuotients:
    return PartialQuotients([2] * n, name="silver")


def integers(n: int = 60) -> PartialQuotients:
    return PartialQuotients(range(1, n + 1), name="integers")


def periodic(block: Sequence[int], n: int = 60) -> PartialQuotients:
    block = list(block)
    return PartialQuotients([block[i % len(block)] for i in range(n)],
                            name="periodic")


def _ceil_power(p: int, c: Fraction) -> int:
    """ceil(p ** c) for a positive integer p and rational c >= 0, exactly."""
    if c == 0 or p == 1:
        return 1
    u, v = c.numerator, c.denominator
    base = p ** u
    if v == 1:
        return base
    r = _iroot(base, v)
    return r if r ** v == base else r + 1


def _iroot(x: int, k: int) -> int:
    """floor(x ** (1/k)) for x >= 0."""
    if x < 2:
        return x
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


class _CalibratedRule:
    """a_{n+1} = max(1, ceil(P_n ** (beta - 2)))."""

    def __init__(self, beta: float):
        if beta < 2:
            raise ValueError("beta must be >= 2")
        self.beta = beta
        self.exponent = Fraction(beta - 2).limit_denominator(1000)

    def __call__(self, n, p_prev):
        if isinstance(p_prev, int):
            return max(1, _ceil_power(p_prev, self.exponent))
        c = mpmath.mpf(self.exponent.numerator) / self.exponent.denominator
        return max(mpmath.mpf(1), mpmath.ceil(p_prev ** c))


def beta_calibrated(beta: float) -> PartialQuotients:
    """Digits forcing ln P_{n+1} / ln P_n -> beta - 1."""
    return PartialQuotients(rule=_CalibratedRule(beta), name=f"calibrated:{beta:g}")


def liouville_digits(a1: int, count: int) -> PartialQuotients:
    """Ultrarapid digits ``a_n = P_{n-1}^{n-1} + 1``, starting from ``a_1``."""
    if a1 < 1 or count < 1:
        raise ValueError("a1 and count must be >= 1")
    if count > LIOUVILLE_SAFE_COUNT:
        warnings.warn(f"liouville_digits(count={count}): denominators grow like "
                      "exp(n!) and become astronomically large", stacklevel=2)
    digits = [a1]
    p_prev, p = 1, a1
    for n in range(2, count + 1):
        a = p ** (n - 1) + 1
        digits.append(a)
        p_prev, p = p, a * p + p_prev
    return PartialQuotients(digits, name=f"liouville:{a1}")


class _LiouvilleRule:
    """Same digits as :func:`liouville_digits`, produced on demand."""

    def __init__(self, a1: int):
        if a1 < 1:
            raise ValueError("a1 must be >= 1")
        self.a1 = a1

    def __call__(self, n, p_prev):
        return self.a1 if n == 1 else p_prev ** (n - 1) + 1


def liouville_rule(a1: int) -> PartialQuotients:
    """Unbounded Liouville-type expansion; only the digits actually used are built."""
    return PartialQuotients(rule=_LiouvilleRule(a1), name=f"liouville:{a1}")


@dataclass(frozen=True)
class Convergent:
    n: int
    Q: int
    P: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.Q, self.P)


def _convergents_of(digits: Sequence[int]) -> list[Convergent]:
    out = []
    q_prev, q = 1, 0
    p_prev, p = 0, 1
    for i, a in enumerate(digits, start=1):
        q_prev, q = q, a * q + q_prev
        p_prev, p = p, a * p + p_prev
        out.append(Convergent(i, q, p))
    return out


def convergents(pq: PartialQuotients, n: int) -> list[Convergent]:
    if n < 1:
        raise ValueError("n must be >= 1")
    return _convergents_of(pq.prefix(n))


def continuant(digits: Sequence[int]) -> int:
    k_prev, k = 0, 1
    for a in digits:
        k_prev, k = k, a * k + k_prev
    return k


def cf_of_fraction(f: Fraction) -> PartialQuotients:
    f = Fraction(f)
    if not 0 < f < 1:
        raise ValueError("cf_of_fraction expects 0 < f < 1")
    digits = []
    num, den = f.numerator, f.denominator
    while num:
        a, r = divmod(den, num)
        digits.append(a)
        den, num = num, r
    return PartialQuotients(digits, finite=True)


def value(pq: PartialQuotients) -> Fraction:
    """Exact value of a finite continued fraction."""
    if not pq.finite:
        raise ValueError("only finite continued fractions have an exact value")
    return convergents(pq, len(pq))[-1].value


def bracket(pq: PartialQuotients, n: Optional[int] = None) -> tuple[Fraction, Fraction]:
    """Exact bounds ``(lo, hi)`` on the number described by ``pq``.

    For an infinite expansion known through ``n`` digits the number lies
    strictly between ``Q_n/P_n`` and ``(Q_n + Q_{n-1}) / (P_n + P_{n-1})``.
    A finite expansion returns its exact value twice.
    """
    if pq.finite:
        v = value(pq)
        return v, v
    if n is None:
        n = pq.available
        if n is None:
            raise ValueError("give n for a rule-generated expansion")
    if n < 1:
        raise ValueError("need at least one digit")
    c = _convergents_of(pq.prefix(n))
    q_prev, p_prev = (c[-2].Q, c[-2].P) if n > 1 else (0, 1)
    end = c[-1].value
    med = Fraction(c[-1].Q + q_prev, c[-1].P + p_prev)
    return (end, med) if end < med else (med, end)


def materialize(pq: PartialQuotients, min_denominator: int) -> PartialQuotients:
    """Explicit prefix of a rule-generated expansion reaching ``P_n >= min_denominator``."""
    if pq.rule is None:
        return pq
    n = 1
    while convergents(pq, n)[-1].P < min_denominator:
        n += 1
    return PartialQuotients(pq.prefix(n), name=pq.name)


def split_identity_check(b: Sequence[int], a: Sequence[int]) -> bool:
    if not b or not a:
        raise ValueError("both digit blocks must be non-empty")
    lhs = continuant(list(b) + list(a))
    rhs = continuant(b) * continuant(a) + continuant(b[:-1]) * continuant(a[1:])
    return lhs == rhs


def _distance_interval(pq: PartialQuotients, target: Fraction):
    """Exact (lo, hi, open) bounds on |i - target|; open=True for irrationals."""
    lo, hi = bracket(pq)
    if pq.finite:
        d = abs(lo - target)
        return d, d, False
    if lo <= target <= hi:
        return Fraction(0), max(target - lo, hi - target), True
    d1, d2 = abs(lo - target), abs(hi - target)
    return min(d1, d2), max(d1, d2), True


def approximation_bounds_check(pq: PartialQuotients, n: int) -> bool:
    """Certify ``1/(P_n(P_n+P_{n+1})) < |i - Q_n/P_n| < 1/(P_n P_{n+1})``."""
    avail = pq.available
    if avail is not None and avail < n + 2:
        raise ValueError(f"need at least n + 2 = {n + 2} digits, have {avail}")
    if n < 1:
        raise ValueError("n must be >= 1")
    c = convergents(pq, n + 1)
    pn, pn1 = c[n - 1].P, c[n].P
    lower = Fraction(1, pn * (pn + pn1))
    upper = Fraction(1, pn * pn1)
    if pq.rule is not None:
        pq = PartialQuotients(pq.prefix(n + 2), name=pq.name)
    d_lo, d_hi, is_open = _distance_interval(pq, c[n - 1].value)
    if is_open:
        return lower <= d_lo and d_hi <= upper
    return lower < d_lo and d_hi < upper


def is_convergent(pq: PartialQuotients, r: Fraction, horizon: int) -> bool:
    r = Fraction(r)
    avail = pq.available
    n = horizon if avail is None else min(horizon, avail)
    return any(c.value == r for c in convergents(pq, n)) if n >= 1 else False


def claim1_min_denominator(theta: float) -> int:
    """Smallest s with s**theta > 2, i.e. floor(2**(1/theta)) + 1."""
    return math.floor(2 ** (1 / theta)) + 1


def _power_bounds(s: int, gamma: float) -> tuple[Fraction, Fraction]:
    """Rational lo <= s**-gamma <= hi."""
    t = s ** -gamma
    eps = 1e-12
    return Fraction(t * (1 - eps)), Fraction(t * (1 + eps))


def claim1_oracle(pq: PartialQuotients, beta: float, theta: float, s_max: int) -> list[Fraction]:
    """Rationals ``r/s`` with ``|i - r/s| < s**-(beta+theta)`` that are not convergents.

    Every denominator ``s`` from ``floor(2**(1/theta)) + 1`` up to ``s_max``
    is scanned.  Numerators with ``|s*i - r| >= 1`` cannot satisfy the bound
    (it is below ``1/s``), so only ``r`` adjacent to ``s*i`` are compared.
    A candidate is kept whenever the bound *may* hold given the exact bracket
    of ``i``, so the check errs towards reporting.
    """
    if beta < 2 or not 0 < theta < 1:
        raise ValueError("need beta >= 2 and 0 < theta < 1")
    s_min = claim1_min_denominator(theta)
    if s_max < s_min:
        warnings.warn(f"empty domain: s_max={s_max} < {s_min}", EmptyDomainWarning, stacklevel=2)
        return []
    if pq.rule is not None:
        pq = materialize(pq, min_denominator=4 * s_max ** 2)
    lo, hi = bracket(pq)
    convs = {c.value for c in convergents(pq, pq.available)}
    gamma = beta + theta
    violations = []
    for s in range(s_min, s_max + 1):
        _, t_hi = _power_bounds(s, gamma)
        r_lo = math.floor(lo * s)
        r_hi = math.ceil(hi * s)
        for r in range(max(r_lo, 0), min(r_hi, s) + 1):
            cand = Fraction(r, s)
            if lo <= cand <= hi:
                d_min = Fraction(0)
            else:
                d_min = min(abs(cand - lo), abs(cand - hi))
            if d_min < t_hi and cand not in convs:
                violations.append(cand)
    return sorted(set(violations))


def log_denominators(pq: PartialQuotients, n: int) -> list[float]:
    """``ln P_1, ..., ln P_n``.

    Explicit digits are always combined exactly.  A digit rule switches to
    extended-exponent floating point once ``P_n`` exceeds ``EXACT_BIT_LIMIT``
    bits; relative error then stays near 2**-100 per step.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if pq.rule is None:
        return [math.log(c.P) for c in convergents(pq, n)]
    out = []
    p_prev, p = 0, 1
    digits_known = pq.digits
    with mpmath.workprec(128):
        for i in range(1, n + 1):
            a = digits_known[i - 1] if i <= len(digits_known) else pq.rule(i, p)
            p_prev, p = p, a * p + p_prev
            if isinstance(p, int) and p.bit_length() > EXACT_BIT_LIMIT:
                p, p_prev = mpmath.mpf(p), mpmath.mpf(p_prev)
            out.append(math.log(p) if isinstance(p, int) else float(mpmath.log(p)))
    return out


@dataclass
class TypeEstimate:
    beta_hat: float
    label: str
    ratio_series: list[float]
    exponent_series: list[float]
    kappa_series: list[float]
    indices: list[int]
    window: int
    meta: dict = field(default_factory=dict)

    @property
    def display(self) -> str:
        if self.label == "G_beta":
            return f"G_{self.beta_hat:.4g}"
        return self.label


DIVERGENCE_THRESHOLD = 10.0
DIVERGENCE_MIN_STEP = 0.5


def beta_estimate(pq: PartialQuotients, N: int, window: Optional[int] = None, *,
                  divergence_threshold: float = DIVERGENCE_THRESHOLD,
                  divergence_min_step: float = DIVERGENCE_MIN_STEP) -> TypeEstimate:
    """Estimate the shell index beta from ``limsup ln P_{n+1} / ln P_n = beta - 1``.

    The limsup is read as the maximum ratio over the last ``window`` indices
    (default ``N // 2``).  ``G_inf`` is reported when that tail is strictly
    increasing and either exceeds ``divergence_threshold`` or keeps growing by
    at least ``divergence_min_step`` per index.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    if window is None:
        window = max(2, N // 2)
    if window < 2 or window > N:
        raise ValueError("need 2 <= window <= N")
    meta = {"N": N, "window": window, "divergence_threshold": divergence_threshold,
            "divergence_min_step": divergence_min_step,
            "epsilon": "1/(P_n P_{n+1})"}
    if pq.finite:
        return TypeEstimate(float("nan"), "rational", [], [], [], [], window,
                            dict(meta, digits=pq.available))
    logs = log_denominators(pq, N)
    indices, ratios, exps = [], [], []
    for n in range(1, N):
        ln_p, ln_next = logs[n - 1], logs[n]
        if ln_p <= 0:
            continue
        indices.append(n)
        ratios.append(ln_next / ln_p)
        exps.append(ln_p / (ln_p + ln_next))
    tail_idx = [j for j, n in enumerate(indices) if n >= N - window]
    tail = [ratios[j] for j in tail_idx]
    if len(tail) < 2:
        return TypeEstimate(float("nan"), "inconclusive", ratios, exps, [], indices, window, meta)
    beta_hat = 1.0 + max(tail)
    steps = [b - a for a, b in zip(tail, tail[1:])]
    increasing = all(s > 0 for s in steps)
    if increasing and (max(tail) > divergence_threshold or min(steps) >= divergence_min_step):
        label = "G_inf"
    else:
        label = "G_beta"
    kappas = []
    for n in indices:
        ln_p, ln_next = logs[n - 1], logs[n]
        try:
            kappas.append(math.exp(-ln_p + (ln_p + ln_next) / beta_hat))
        except OverflowError:
            kappas.append(float("inf"))
    return TypeEstimate(beta_hat, label, ratios, exps, kappas, indices, window, meta)


def jarnik_dimension(beta: float) -> float:
    """Hausdorff dimension of the Jarnik class J_beta (a lookup, beta >= 2)."""
    if beta < 2:
        raise ValueError("beta must be >= 2")
    return 2.0 / beta


def jarnik_witness(pq: PartialQuotients, k: float) -> Optional[int]:
    """Smallest n with P_n >= 2 certifying ``|i - Q_n/P_n| < P_n**-k``.

    Uses the upper bound ``|i - Q_n/P_n| < 1/(P_n P_{n+1})``; needs
    ``P_n ** (k - 1) <= P_{n+1}`` which is checked exactly for integer k.
    """
    avail = pq.available
    if avail is None:
        raise ValueError("materialize the digits first")
    c = convergents(pq, avail)
    for n in range(1, avail):
        pn, pn1 = c[n - 1].P, c[n].P
        if pn < 2:
            continue
        if float(k).is_integer():
            ok = pn ** (int(k) - 1) <= pn1
        else:
            ok = (k - 1) * math.log(pn) < math.log(pn1)
        if ok:
            return n
    return None


@dataclass
class ClaimProbe:
    beta: float
    delta: float
    theta: float
    N: int
    n_delta: Optional[int]
    witnesses: list[int]
    status: str


def claim2_claim3_probe(pq: PartialQuotients, beta: float, delta: float, theta: float,
                        N: int) -> ClaimProbe:
    """Probe ``P_n(P_n+P_{n+1}) < P_n**(beta+delta)`` and ``P_n**(beta-theta) < P_n P_{n+1}``.

    ``n_delta`` is the least n from which the first inequality holds for all
    sampled n <= N - 1.  Witnesses of the second are collected over the tail
    half of the range, since an infinite witness sequence cannot be seen from
    early indices.
    """
    if N < 4:
        raise ValueError("N must be >= 4")
    logs = log_denominators(pq, N)
    holds = []
    for n in range(1, N):
        ln_p, ln_next = logs[n - 1], logs[n]
        lhs = ln_p + float(np.logaddexp(ln_p, ln_next))
        holds.append(lhs < (beta + delta) * ln_p)
    n_delta = None
    for start in range(N - 1, 0, -1):
        if holds[start - 1]:
            n_delta = start
        else:
            break
    witnesses = []
    for n in range(N // 2, N):
        ln_p, ln_next = logs[n - 1], logs[n]
        if ln_p > 0 and (beta - theta) * ln_p < ln_p + ln_next:
            witnesses.append(n)
    conclusive = n_delta is not None and n_delta < N // 2 and witnesses
    status = "holds" if conclusive else f"inconclusive({N})"
    return ClaimProbe(beta, delta, theta, N, n_delta, witnesses, status)


def parse_digits(spec: str, n: int = 60) -> PartialQuotients:
    """Parse a digit specification.

    Accepted forms: ``"2,2,3"`` (finite), ``"1,2,..."`` (block repeated),
    ``golden``, ``silver``, ``integers``, ``liouville:A1``, ``calibrated:BETA``.
    """
    spec = spec.strip()
    name, _, arg = spec.partition(":")
    try:
        if name == "golden":
            return golden(n)
        if name == "silver":
            return silver(n)
        if name == "integers":
            return integers(n)
        if name == "liouville":
            return liouville_rule(int(arg or 1))
        if name == "calibrated":
            return beta_calibrated(float(arg))
        parts = [p.strip() for p in spec.split(",") if p.strip()]
        repeat = bool(parts) and parts[-1] in ("...", "…")
        if repeat:
            parts = parts[:-1]
        block = [int(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"malformed digit specification {spec!r}") from exc
    if not block or any(a < 1 for a in block):
        raise ValueError(f"malformed digit specification {spec!r}")
    if repeat:
        return periodic(block, n)
    return PartialQuotients(block, finite=True)
