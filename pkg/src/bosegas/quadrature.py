"""Truncated-trapezoid quadrature on tensor products of vertical lines.

Each contour is a vertical line Re w = const truncated to imaginary part
[-T, T]; the trapezoid rule there converges geometrically for the analytic,
Gaussian-decaying integrands this package produces.  A tensor product of up
to four lines is swept in fixed-size chunks; each chunk is reduced at its own
log scale and chunk results feed a compensated (Neumaier) accumulator in a
fixed order, so results are bit-identical for any worker count.

Integrands are vectorized and scaled: f(W) with W of shape (lines, m) returns
(mantissa[m] complex, log_scale[m] float) meaning value = mantissa*exp(log).

Two error diagnostics ride along (estimates, not enclosures):
  * tail_bound   - relative Gaussian tail mass erfc(sqrt(a_k) T) summed over
                   lines, from the declared decay rates a_k;
  * step_estimate- relative difference against the embedded every-other-node
                   grid, a conservative bound dominated by the coarse grid's
                   own error.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._threads import thread_count
from .errors import NumericsError
from .scaled import ScaledComplex, rel_diff

_TWO_PI = 2.0 * math.pi
_CHUNK = 1 << 16  # fixed: chunk layout must not depend on worker count
_MAX_NODES_TOTAL = 20_000_000_000


@dataclass(frozen=True)
class ContourPlan:
    """Vertical-line family Re w = theta + k*epsilon, k = 0..lines-1.

    half_width truncates each line to imaginary part [-T, T]; nodes_per_line
    is odd so the real axis crossing is always a node.
    """

    theta: float
    epsilon: float
    half_width: float
    nodes_per_line: int = 257

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.epsilon)):
            raise ValueError("contour plan needs finite theta and epsilon")
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        n = self.nodes_per_line
        if not isinstance(n, int) or n < 3 or n % 2 == 0:
            raise ValueError(f"nodes_per_line must be an odd integer >= 3, got {n}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.nodes_per_line - 1)


@dataclass(frozen=True)
class QuadratureResult:
    value: ScaledComplex
    tail_bound: float
    step_estimate: float


def line_nodes(plan: ContourPlan, line_index: int) -> list[tuple[complex, float]]:
    """Nodes and trapezoid weights (h/2pi, halved at the ends) for one line."""
    y, w = _grid_1d(plan)
    re = plan.theta + line_index * plan.epsilon
    return [(complex(re, yi), wi) for yi, wi in zip(y.tolist(), w.tolist())]


def _grid_1d(plan: ContourPlan):
    y = np.linspace(-plan.half_width, plan.half_width, plan.nodes_per_line)
    w = np.full(plan.nodes_per_line, plan.spacing / _TWO_PI)
    w[0] *= 0.5
    w[-1] *= 0.5
    return y, w


class _Accumulator:
    """Compensated (Neumaier) sum of scaled complex chunk totals."""

    __slots__ = ("log", "re", "re_c", "im", "im_c")

    def __init__(self):
        self.log = -math.inf
        self.re = self.re_c = self.im = self.im_c = 0.0

    def add(self, s: complex, log: float):
        if s == 0:
            return
        if log > self.log:
            shrink = 0.0 if self.log == -math.inf else math.exp(self.log - log)
            self.re *= shrink
            self.re_c *= shrink
            self.im *= shrink
            self.im_c *= shrink
            self.log = log
            vre, vim = s.real, s.imag
        else:
            grow = math.exp(log - self.log)
            vre, vim = s.real * grow, s.imag * grow
        t = self.re + vre
        self.re_c += (self.re - t) + vre if abs(self.re) >= abs(vre) else (vre - t) + self.re
        self.re = t
        t = self.im + vim
        self.im_c += (self.im - t) + vim if abs(self.im) >= abs(vim) else (vim - t) + self.im
        self.im = t

    def result(self) -> ScaledComplex:
        m = complex(self.re + self.re_c, self.im + self.im_c)
        if m == 0 or self.log == -math.inf:
            return ScaledComplex.zero()
        return ScaledComplex(m, self.log).normalize()


def integrate_tensor(f, plan: ContourPlan, num_lines: int, decay_rates=None, abscissas=None):
    """Tensor-product trapezoid integral of a scaled vectorized integrand.

    f(W) -> (mantissa, log_scale) arrays over node columns W of shape
    (num_lines, m).  Line k sits at Re w = theta + k*epsilon unless explicit
    `abscissas` override the real parts.  decay_rates (per-line Gaussian
    coefficients a_k with |integrand| ~ exp(-a_k y_k^2)) feed the tail bound.
    """
    if num_lines < 1:
        raise ValueError(f"num_lines must be >= 1, got {num_lines}")
    if abscissas is not None:
        abscissas = tuple(float(a) for a in abscissas)
        if len(abscissas) != num_lines:
            raise ValueError(f"need {num_lines} abscissas, got {len(abscissas)}")
        re_parts = np.array(abscissas)
    else:
        re_parts = plan.theta + plan.epsilon * np.arange(num_lines)
    if decay_rates is not None:
        decay_rates = tuple(float(a) for a in decay_rates)
        if len(decay_rates) != num_lines or any(a <= 0 for a in decay_rates):
            raise ValueError(f"need {num_lines} positive decay rates, got {decay_rates}")

    n = plan.nodes_per_line
    total = n**num_lines
    if total > _MAX_NODES_TOTAL:
        raise NumericsError(f"tensor grid of {total} nodes is beyond reason; shrink the plan")
    y, w1 = _grid_1d(plan)
    strides = n ** np.arange(num_lines - 1, -1, -1, dtype=np.int64)
    coarse_factor = float(2**num_lines)

    def eval_chunk(start):
        flat = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = (flat[None, :] // strides[:, None]) % n  # (lines, m)
        W = re_parts[:, None] + 1j * y[digits]
        weight = np.prod(w1[digits], axis=0)
        mant, logs = f(W)
        mant = np.asarray(mant)
        logs = np.asarray(logs)
        bad = ~(np.isfinite(mant) & np.isfinite(logs))
        if bad.any():
            j = int(np.argmax(bad))
            node = ", ".join(f"w_{k + 1}={W[k, j]:.6g}" for k in range(num_lines))
            raise NumericsError(
                f"integrand not finite at node ({node}), grid indices {digits[:, j].tolist()}"
            )
        scale = float(logs.max())
        contrib = mant * weight * np.exp(logs - scale)
        s_full = complex(contrib.sum())
        even = (digits % 2 == 0).all(axis=0)
        s_coarse = complex(contrib[even].sum()) * coarse_factor
        return s_full, s_coarse, scale

    starts = range(0, total, _CHUNK)
    workers = thread_count()
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(eval_chunk, starts))
    else:
        partials = [eval_chunk(s) for s in starts]

    acc_full, acc_coarse = _Accumulator(), _Accumulator()
    for s_full, s_coarse, scale in partials:  # fixed order: bit-stable results
        acc_full.add(s_full, scale)
        acc_coarse.add(s_coarse, scale)
    value = acc_full.result()
    coarse = acc_coarse.result()

    tail = 0.0
    if decay_rates is not None:
        tail = sum(math.erfc(math.sqrt(a) * plan.half_width) for a in decay_rates)
    step = rel_diff(value, coarse)
    return QuadratureResult(value=value, tail_bound=tail, step_estimate=step)
