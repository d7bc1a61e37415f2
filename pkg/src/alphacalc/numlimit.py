"""Numerical one- and two-sided limits ``lim_{x -> c} g(x)``.

``g`` is sampled on a geometric approach sequence ``c +/- h0 * ratio**k``.
Two extrapolations run over the surviving samples:

* Neville polynomial extrapolation to ``h = 0`` (degree capped), which is
  the right model when ``g(c + h)`` has an expansion in integer powers of
  ``h``;
* Wynn's epsilon algorithm on the sample sequence, which removes geometric
  error components ``q**k`` of unknown ratio and therefore handles
  expansions in fractional powers of ``h`` as well.

For each method the stage with the smallest change between consecutive
estimates is kept, scanning only until rounding noise starts to grow; the
better of the two methods is reported.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .expr import EvalResult

__all__ = [
    "LimitConfig",
    "LimitEstimate",
    "Side",
    "Status",
    "estimate_limit",
    "neville_extrapolate",
    "wynn_epsilon",
]


class Side(enum.Enum):
    FROM_ABOVE = "FromAbove"
    FROM_BELOW = "FromBelow"
    TWO_SIDED = "TwoSided"


class Status(enum.Enum):
    CONVERGED = "Converged"
    DIVERGED = "Diverged"
    OSCILLATING = "Oscillating"
    DOMAIN_EXHAUSTED = "DomainExhausted"


@dataclass(frozen=True)
class LimitConfig:
    """Sampling and classification knobs.

    Divergence is declared when the last ``divergence_window`` sample
    magnitudes increase strictly and either the final one exceeds
    ``divergence_threshold`` or they grow like ``h**-p`` with a stable
    ``p >= min_growth_exponent``.
    """

    h0: float = 1e-2
    ratio: float = 0.5
    steps: int = 20
    tol: float = 1e-9
    max_degree: int = 4
    min_samples: int = 4
    divergence_window: int = 5
    divergence_threshold: float = 1e8
    min_growth_exponent: float = 0.1
    growth_spread: float = 0.25

    def __post_init__(self):
        if not (self.h0 > 0 and 0 < self.ratio < 1 and self.steps >= self.min_samples and self.tol >= 0):
            raise ValueError(f"invalid limit configuration {self!r}")


DEFAULT_CONFIG = LimitConfig()


@dataclass(frozen=True)
class LimitEstimate:
    value: float
    error_estimate: float
    status: Status
    samples: int = 0

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED


def neville_extrapolate(hs: list[float], values: list[float], max_degree: int = 4) -> list[tuple[float, float]]:
    """Polynomial extrapolation of ``values(h)`` to ``h = 0``.

    Returns one ``(estimate, change)`` pair per sample index ``i >= 1``: the
    highest-degree (at most ``max_degree``) Neville estimate using samples
    ending at ``i`` and its distance to the estimate one degree lower or one
    stage earlier, whichever is larger.
    """
    n = len(hs)
    table: list[list[float]] = []
    out = []
    for i in range(n):
        row = [values[i]]
        for j in range(1, min(i, max_degree) + 1):
            num = hs[i - j] * row[j - 1] - hs[i] * table[i - 1][j - 1]
            row.append(num / (hs[i - j] - hs[i]))
        table.append(row)
        if i >= 1:
            best = row[-1]
            prev_stage = table[i - 1][min(len(row) - 1, len(table[i - 1]) - 1)]
            change = max(abs(best - row[-2]), abs(best - prev_stage))
            out.append((best, change))
    return out


def wynn_epsilon(values: list[float], max_order: int = 4) -> list[tuple[float, float]]:
    """Wynn epsilon acceleration of a sequence.

    ``max_order`` counts eliminated geometric components, i.e. the even
    column ``2 * max_order`` is the deepest used.  Returns ``(estimate,
    change)`` pairs for every end index ``n >= 2``, in the same sense as
    :func:`neville_extrapolate`.
    """
    out = []
    prev_best = None
    for n in range(len(values)):
        width = min(n + 1, 2 * max_order + 1)
        window = values[n + 1 - width : n + 1]
        estimates = _epsilon_diagonal(window)
        if len(estimates) < 2:
            prev_best = estimates[-1]
            continue
        best = estimates[-1]
        change = abs(best - estimates[-2])
        if prev_best is not None:
            change = max(change, abs(best - prev_best))
        prev_best = best
        out.append((best, change))
    return out


def _epsilon_diagonal(window: list[float]) -> list[float]:
    """Even-column epsilon estimates anchored at the end of ``window``."""
    prev = [0.0] * (len(window) + 1)
    cur = list(window)
    estimates = [window[-1]]
    col = 0
    while len(cur) > 1:
        nxt = []
        for i in range(len(cur) - 1):
            diff = cur[i + 1] - cur[i]
            if diff == 0.0:
                # sequence already stationary in this column
                return estimates + ([cur[-1]] if col % 2 == 0 and cur[-1] != estimates[-1] else [])
            nxt.append(prev[i + 1] + 1.0 / diff)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0:
            if not math.isfinite(cur[-1]):
                break
            estimates.append(cur[-1])
    return estimates


#: Once a stage is good enough, a change this many times larger marks the
#: start of the rounding-noise regime and ends the scan.
NOISE_GROWTH = 2.0


def _best_stage(stages: list[tuple[float, float]], tol: float) -> tuple[float, float] | None:
    """Stage with the smallest change, ignoring everything past the onset of noise.

    Without the cut a chance agreement between two noisy small-step stages
    can beat the genuinely converged stages.
    """
    best = None
    for stage in stages:
        value, change = stage
        if not (math.isfinite(value) and math.isfinite(change)):
            continue
        if best is not None and best[1] <= tol * max(1.0, abs(best[0])) and change > NOISE_GROWTH * best[1]:
            break
        if best is None or change < best[1]:
            best = stage
    return best


def _is_diverging(mags: list[float], hs: list[float], cfg: LimitConfig) -> bool:
    w = cfg.divergence_window
    if len(mags) < w:
        return False
    tail, htail = mags[-w:], hs[-w:]
    if not all(b > a for a, b in zip(tail, tail[1:])):
        return False
    if tail[-1] > cfg.divergence_threshold:
        return True
    if tail[0] <= 0.0:
        return False
    rates = [math.log(b / a) / math.log(hp / hn) for a, b, hp, hn in zip(tail, tail[1:], htail, htail[1:])]
    lo, hi = min(rates), max(rates)
    return lo >= cfg.min_growth_exponent and hi - lo <= cfg.growth_spread * hi


def _one_sided(g: Callable[[float], EvalResult], c: float, sign: float, cfg: LimitConfig) -> LimitEstimate:
    hs: list[float] = []
    values: list[float] = []
    for k in range(cfg.steps):
        x = c + sign * cfg.h0 * cfg.ratio**k
        h = abs(x - c)  # exact offset actually sampled
        if h == 0.0:
            break
        r = g(x)
        if r.domain_ok and math.isfinite(r.value):
            hs.append(h)
            values.append(r.value)
    n = len(values)
    if n < cfg.min_samples:
        return LimitEstimate(math.nan, math.inf, Status.DOMAIN_EXHAUSTED, n)

    if _is_diverging([abs(v) for v in values], hs, cfg):
        return LimitEstimate(math.nan, math.inf, Status.DIVERGED, n)

    candidates = [
        s
        for s in (
            _best_stage(neville_extrapolate(hs, values, cfg.max_degree), cfg.tol),
            _best_stage(wynn_epsilon(values, cfg.max_degree), cfg.tol),
        )
        if s is not None
    ]
    if not candidates:
        return LimitEstimate(math.nan, math.inf, Status.OSCILLATING, n)
    value, err = min(candidates, key=lambda s: s[1])
    if err <= cfg.tol * max(1.0, abs(value)):
        return LimitEstimate(value, err, Status.CONVERGED, n)
    return LimitEstimate(value, err, Status.OSCILLATING, n)


def estimate_limit(
    g: Callable[[float], EvalResult],
    c: float,
    side: Side = Side.TWO_SIDED,
    config: LimitConfig | None = None,
) -> LimitEstimate:
    """Estimate ``lim_{x -> c} g(x)``.

    ``g`` returns :class:`~alphacalc.expr.EvalResult`; samples outside the
    domain are dropped.  Fewer than ``config.min_samples`` usable samples on
    a requested side gives ``DOMAIN_EXHAUSTED``.

    A two-sided limit converges only when both one-sided limits converge and
    agree within their combined error (plus ``tol`` relative slack); the
    value is then their inverse-variance weighted mean.
    """
    cfg = config or DEFAULT_CONFIG
    if side is Side.FROM_ABOVE:
        return _one_sided(g, c, 1.0, cfg)
    if side is Side.FROM_BELOW:
        return _one_sided(g, c, -1.0, cfg)

    above = _one_sided(g, c, 1.0, cfg)
    below = _one_sided(g, c, -1.0, cfg)
    for status in (Status.DOMAIN_EXHAUSTED, Status.DIVERGED, Status.OSCILLATING):
        if status in (above.status, below.status):
            err = max(above.error_estimate, below.error_estimate)
            return LimitEstimate(math.nan, err, status, above.samples + below.samples)
    scale = max(1.0, abs(above.value), abs(below.value))
    gap = abs(above.value - below.value)
    n = above.samples + below.samples
    if gap > above.error_estimate + below.error_estimate + cfg.tol * scale:
        return LimitEstimate(math.nan, gap, Status.OSCILLATING, n)
    floor = 1e-16 * scale
    wa = 1.0 / max(above.error_estimate, floor) ** 2
    wb = 1.0 / max(below.error_estimate, floor) ** 2
    value = (wa * above.value + wb * below.value) / (wa + wb)
    err = max(above.error_estimate, below.error_estimate, gap / 2)
    return LimitEstimate(value, err, Status.CONVERGED, n)
