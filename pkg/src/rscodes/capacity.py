"""Analytic capacity evaluators: tandem links, sharing strategies, water-filling,
Middleton Class-A impulse noise, and basic entropy tools.

Rates for the tandem/broadcast models default to nat/s and the Gaussian
channel capacities to bit/s; every evaluator takes ``unit`` ("nat" or "bit").
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .errors import BadDistribution, BadParameters, InfeasibleCapacity
from .rng import stream

LN2 = math.log(2)


def _scale(unit: str) -> float:
    """Multiplier turning a value in nats into ``unit``."""
    if unit == "nat":
        return 1.0
    if unit == "bit":
        return 1 / LN2
    raise BadParameters(f"unit must be 'nat' or 'bit', got {unit!r}")


# entropy tools
def _check_dist(p, tol=1e-12) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p < 0) or abs(p.sum() - 1) > tol:
        raise BadDistribution("probabilities must be non-negative and sum to 1")
    return p


def h2(p: float) -> float:
    """Binary entropy in bits; h2(0) = h2(1) = 0."""
    if not 0 <= p <= 1:
        raise BadDistribution("p outside [0, 1]")
    if p in (0, 1):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def entropy(p) -> float:
    p = _check_dist(p)
    q = p[p > 0]
    return float(-(q * np.log2(q)).sum())


def mutual_information(joint) -> float:
    """I(X; Y) in bits for a joint probability table (rows x, columns y)."""
    J = np.asarray(joint, dtype=float)
    _check_dist(J.ravel())
    return entropy(J.sum(axis=1)) + entropy(J.sum(axis=0)) - entropy(J.ravel())


# Q function and tandem links
def q_func(x: float) -> float:
    """Gaussian tail probability."""
    return 0.5 * math.erfc(x / math.sqrt(2))


def q_approx(x: float) -> float:
    """exp(-x^2 / 2), a crude upper approximation of the tail."""
    return math.exp(-x * x / 2)


def q_inv(p: float) -> float:
    if not 0 < p < 1:
        raise BadParameters("q_inv needs 0 < p < 1")
    return -NormalDist().inv_cdf(p)


@dataclass
class LinkParams:
    f: float = 1.0  # amplitude attenuation per link
    EbN0: float = 1.0  # linear
    L: int = 1
    D: float = 1.0  # km
    delta: float = 0.0  # dB/km
    B: float = 1.0  # Hz
    P: float = 1.0  # W
    sigma2: float = 1.0
    gamma2: float = 1.0
    eta2: float = 1.0

    def __post_init__(self):
        if not 0 < self.f <= 1:
            raise BadParameters("need 0 < f <= 1")
        if min(self.P, self.sigma2, self.gamma2, self.eta2, self.B) < 0:
            raise BadParameters("powers and variances must be non-negative")

    @staticmethod
    def ebn0_from_db(db: float) -> float:
        return 10 ** (db / 10)

    @staticmethod
    def f_from_attenuation(delta_db_per_km: float, d_km: float) -> float:
        """Amplitude factor with f^2 = 10^(-delta d / 10)."""
        return math.sqrt(10 ** (-delta_db_per_km * d_km / 10))


def tandem_error(link: LinkParams, approx: bool = False):
    """(P_1, P_L): detection error after one link and after L links in tandem."""
    Q = q_approx if approx else q_func
    return Q(math.sqrt(link.EbN0 * link.f**2)), Q(math.sqrt(link.EbN0 * link.f ** (2 * link.L)))


def link_capacity(pe: float) -> float:
    """1 - h2(P_e) in bits per transmission."""
    return 1 - h2(pe)


def tandem_capacities(p1: float, f2: float, L: int) -> list[float]:
    """[C(d), C(2d), ..., C(Ld)] given the one-link error p1 and power attenuation f^2."""
    a = q_inv(p1)
    return [link_capacity(q_func(a * f2 ** ((i - 1) / 2))) for i in range(1, L + 1)]


def coop_allocate(k: float, capacities):
    """Lengths n_i with k = sum_j n_j C((i-j+1)d) for every i; returns (n, C_df, C_coop)."""
    C = [float(c) for c in capacities]
    if not C or C[0] <= 0:
        raise InfeasibleCapacity("C(d) must be positive")
    if any(b > a for a, b in zip(C, C[1:])):
        raise BadParameters("capacities must be non-increasing in distance")
    n = []
    for i in range(len(C)):
        rest = k - math.fsum(n[j] * C[i - j] for j in range(i))
        n.append(0.0 if abs(rest) <= 1e-12 * abs(k) else rest / C[0])
    return n, C[0] / len(C), k / sum(n)


def coop_rate_two_links(c1: float, c2: float) -> float:
    return c1 / (2 - c2 / c1)


# sharing strategies on the two-receiver tandem line
def _snr(link: LinkParams, power: float, gain: float, bw: float = 1.0) -> float:
    return power * gain / (2 * bw * link.sigma2 * link.B)


def sharing_rates(link: LinkParams, strategy: str, split: float = 0.5, p1: float | None = None, unit: str = "nat"):
    """(R to R1, R to R2) for one transmitter and two receivers at distances d and 2d.

    split is alpha for TS/FS/REP/REP*, gamma for BC and delta for MAC.  FS
    gives noise power proportional to each band's share; p1 is the power on
    band 1 (water-filled when omitted).
    """
    if not 0 <= split <= 1:
        raise BadParameters("split parameter must lie in [0, 1]")
    B, P, f = link.B, link.P, link.f
    s = _scale(unit)
    a, abar = split, 1 - split
    C1 = B * math.log1p(_snr(link, P, f**2))
    C2 = B * math.log1p(_snr(link, P, f**4))
    if strategy == "TS":
        r = (a * C1, abar * C2)
    elif strategy == "FS":
        if p1 is None:
            p1, _ = waterfill2(P, B, a, link.sigma2 / f**2, link.sigma2 / f**4) if a else (0.0, P)
        if not 0 <= p1 <= P:
            raise BadParameters("band-1 power outside [0, P]")
        r1 = a * B * math.log1p(_snr(link, p1, f**2, a)) if a else 0.0
        r2 = abar * B * math.log1p(_snr(link, P - p1, f**4, abar)) if abar else 0.0
        r = (r1, r2)
    elif strategy == "REP":
        r = (a * C1, abar * C1 / 2)
    elif strategy == "REP*":
        r = (a * C1, abar * C1 / (2 - C2 / C1))
    elif strategy == "BC":
        g = split
        r1 = B * math.log1p(g * P * f**2 / (2 * link.sigma2 * B))
        r2 = B * math.log1p((1 - g) * P * f**4 / (2 * link.sigma2 * B + g * P * f**4))
        r = (r1, r2)
    elif strategy == "MAC":
        d = split
        r1 = B * math.log1p(d * P * f**2 / (2 * link.sigma2 * B))
        r2 = B * math.log1p((1 - d) * P * f**4 / (2 * link.sigma2 * B + d * P * f**4))
        r = (r1, r2)
    else:
        raise BadParameters(f"unknown strategy {strategy!r}")
    return r[0] * s, r[1] * s


def broadcast_rates(P: float, B: float, sigma2: float, f: float, shares, unit: str = "nat") -> list[float]:
    """Rates to receivers 1..N on a tandem line.

    Receiver i sees every signal with power gain f^(2i); it removes the
    signals meant for farther receivers and treats those for nearer ones as
    noise.
    """
    shares = list(shares)
    if abs(sum(shares) - 1) > 1e-12 or min(shares) < 0:
        raise BadParameters("power shares must be non-negative and sum to 1")
    out = []
    for i, a in enumerate(shares, start=1):
        g = f ** (2 * i)
        interf = sum(shares[j] for j in range(i - 1)) * P * g
        out.append(B * math.log1p(a * P * g / (2 * sigma2 * B + interf)) * _scale(unit))
    return out


def repeat_worse_than_ts(link: LinkParams) -> bool:
    """Closed-form condition P / (sigma^2 B) > (1 - 2 f^2) / f^6 as stated for the limiting points."""
    f = link.f
    return link.P / (link.sigma2 * link.B) > (1 - 2 * f**2) / f**6


def repeat_crossover_f(P: float, B: float, sigma2: float) -> float:
    """Attenuation f at which C1 / 2 = C2 under the rate formulas, found by bisection."""

    def gap(f):
        x = P / (2 * sigma2 * B)
        return math.log1p(x * f**4) - 0.5 * math.log1p(x * f**2)

    lo, hi = 1e-6, 1.0
    if gap(hi) <= 0:
        raise BadParameters("repeating never loses on (0, 1]")
    for _ in range(200):
        mid = (lo + hi) / 2
        if gap(mid) > 0:
            hi = mid
        else:
            lo = mid
    return hi


# Gaussian channel capacities and water-filling
def gaussian_capacity(P: float, B: float, noise: float, unit: str = "bit") -> float:
    """B log(1 + P / (2 B noise)) per second."""
    return B * math.log1p(P / (2 * B * noise)) * _scale(unit)


def degraded_broadcast(alpha: float, P: float, sigma2: float, gamma2: float, unit: str = "bit"):
    """Per-transmission rates (C1, C2) with power alpha P to the stronger receiver."""
    if gamma2 < sigma2:
        raise BadParameters("the second receiver must be the noisier one")
    c1 = 0.5 * math.log1p(alpha * P / sigma2)
    c2 = 0.5 * math.log1p((1 - alpha) * P / (alpha * P + gamma2))
    return c1 * _scale(unit), c2 * _scale(unit)


def waterfill2(P: float, B: float, alpha: float, gamma2: float, sigma2: float):
    """Powers (P1, P2) on bands alpha B (noise gamma2) and (1-alpha) B (noise sigma2)."""
    if P < 0:
        raise BadParameters("P >= 0")
    abar = 1 - alpha
    gap = 2 * B * (gamma2 - sigma2)
    if gamma2 >= sigma2:
        if P < gap * abar:
            return 0.0, float(P)
    elif P < -gap * alpha:
        return float(P), 0.0
    return alpha * (P - gap * abar), abar * (P + gap * alpha)


def waterfill_n(P: float, B: float, variances, shares=None, tol: float = 1e-15):
    """Water-filling over channels of bandwidth shares[i] * B (default B each).

    P_i = 2 b_i (nu - sigma_i^2)^+ with the level nu set by bisection so that
    the powers sum to P.
    """
    var = np.asarray(variances, dtype=float)
    bw = B * (np.ones_like(var) if shares is None else np.asarray(shares, dtype=float))
    if P < 0 or np.any(var < 0) or np.any(bw <= 0):
        raise BadParameters("need P >= 0, variances >= 0, positive bandwidths")
    if P == 0:
        return np.zeros_like(var)

    def power(nu):
        return 2 * bw * np.clip(nu - var, 0, None)

    lo, hi = var.min(), var.max() + P / (2 * bw.sum()) + 1.0
    for _ in range(400):
        mid = (lo + hi) / 2
        if power(mid).sum() > P:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol * max(1.0, hi):
            break
    p = power((lo + hi) / 2)
    return p * (P / p.sum())


def water_levels(powers, B: float, variances, shares=None) -> np.ndarray:
    """P_i / (2 b_i) + sigma_i^2 for each channel."""
    var = np.asarray(variances, dtype=float)
    bw = B * (np.ones_like(var) if shares is None else np.asarray(shares, dtype=float))
    return np.asarray(powers) / (2 * bw) + var


# Middleton Class-A noise
@dataclass
class MiddletonParams:
    A: float
    sigma_G2: float = 1.0
    Gamma: float | None = None  # sigma_G^2 / sigma_I^2
    sigma_I2: float | None = None
    state_cap: int | None = None

    def __post_init__(self):
        if self.A <= 0:
            raise BadParameters("A > 0")
        if self.sigma_I2 is None:
            if self.Gamma is None or self.Gamma <= 0:
                raise BadParameters("give sigma_I2 or Gamma > 0")
            self.sigma_I2 = self.sigma_G2 / self.Gamma
        elif self.Gamma is None:
            self.Gamma = self.sigma_G2 / self.sigma_I2 if self.sigma_I2 else math.inf
        if self.state_cap is None:
            m, cum, pm = 0, 0.0, math.exp(-self.A)
            while True:
                cum += pm
                if cum >= 1 - 1e-12:
                    break
                m += 1
                pm *= self.A / m
            self.state_cap = m


def middleton_states(params: MiddletonParams):
    """[(m, P_m, sigma_m^2)] for m = 0..state_cap."""
    out = []
    pm = math.exp(-params.A)
    for m in range(params.state_cap + 1):
        if m:
            pm *= params.A / m
        out.append((m, pm, params.sigma_I2 * m / params.A + params.sigma_G2))
    return out


def middleton(params: MiddletonParams, count: int, seed: int) -> np.ndarray:
    rng = stream(seed)
    m = np.minimum(rng.poisson(params.A, count), params.state_cap)
    var = params.sigma_I2 * m / params.A + params.sigma_G2
    return rng.standard_normal(count) * np.sqrt(var)


def middleton_pdf(params: MiddletonParams, x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for _, pm, var in middleton_states(params):
        out += pm * np.exp(-(x * x) / (2 * var)) / math.sqrt(2 * math.pi * var)
    return out


@dataclass
class Capacity:
    value: float
    unit: str
    upper_bound: bool = False

    def __float__(self):
        return self.value


def impulse_capacity(case: str, params: MiddletonParams, P: float, B: float, unit: str = "bit") -> Capacity:
    """Two-state impulse channel capacity per second.

    The Gaussian state (probability 1 - A) has variance sigma_G^2 and the
    impulsive one (probability A) sigma_G^2 + sigma_I^2 / A.  case is
    "<transmitter><receiver>" state knowledge, e.g. "-+" for an informed
    receiver only.  "+-" returns the "++" value marked as an upper bound.
    """
    A, g, i = params.A, params.sigma_G2, params.sigma_I2
    s = P / (2 * B)
    imp = g + i / A
    if case in ("++", "+-"):
        if s >= (1 - A) / A * i:
            v = B * math.log((s + g + i) / g) + A * B * math.log(g / imp)
        else:
            v = (1 - A) * B * math.log((s / (1 - A) + g) / g)
        return Capacity(v * _scale(unit), unit, case == "+-")
    if case == "-+":
        v = (1 - A) * B * math.log((s + g) / g) + A * B * math.log((s + imp) / imp)
    elif case == "--":
        v = B * math.log((s + g + i) / (g + i))
    else:
        raise BadParameters(f"unknown case {case!r}")
    return Capacity(v * _scale(unit), unit)


def state_information_gain_db(params: MiddletonParams) -> float:
    return 10 * math.log10(params.sigma_G2 / (params.sigma_G2 + params.sigma_I2))
