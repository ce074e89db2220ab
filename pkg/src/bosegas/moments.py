"""Moment evaluation: cluster expansion, nested contours, closed forms.

The n-th joint moment of the stochastic heat equation with delta initial data
is a sum over partitions of n of cluster integrals: each partition lambda
contributes an l(lambda)-fold contour integral of

    (1/mult) * det[1/(w_i + lambda_i - w_j)] * K(w expanded to clusters)

over vertical lines Re w_k = theta + (k-1) eps with 0 < eps < 1/(n-1).  The
same moment also has a single n-fold representation on nested contours whose
abscissas descend by gaps > 1.  Both are computed here and must agree; the
full-cluster term lambda = (n) additionally has a closed Gaussian form that
carries the large-t asymptotics.

Plans: given no explicit ContourPlan the integration grid is sized
automatically from what the integrand is known to do — per-line Gaussian
decay rates lambda_k t / 2 fix the truncation T, and the analyticity strip
(the summed kernel is entire; only cluster-matrix poles at vertical distance
min |lambda_i - (j-i) eps| remain) fixes the node spacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedDimensionError
from .kernel import DEFAULT_MIN_SEPARATION, cluster_integrand_batch
from .partitions import Partition, enumerate_partitions
from .quadrature import ContourPlan, QuadratureResult, integrate_tensor
from .scaled import ScaledComplex
from .spectral import SpacePoints, log_ground_state, lyapunov_exponent, optimal_theta

MAX_SUM_SIZE = 4  # full partition sum / nested contours
MAX_TOP_SIZE = 9  # single full-cluster integral
TAIL_TOL = 1e-12
TAIL_SAFETY = 20.0  # log-margin absorbing non-Gaussian prefactors
_STEP_TOL = {1: 1e-16, 2: 1e-14, 3: 1e-10, 4: 3e-7}
_MIN_NODES = 65


@dataclass(frozen=True)
class MomentRequest:
    """A moment evaluation target: time t, points x, optional explicit plan."""

    t: float
    x: SpacePoints
    plan: ContourPlan | None = None

    def __post_init__(self):
        if not (math.isfinite(self.t) and self.t > 0):
            raise ValueError(f"t must be positive and finite, got {self.t}")
        object.__setattr__(self, "x", SpacePoints.of(self.x))

    @property
    def n(self) -> int:
        return self.x.n


def default_epsilon(n: int) -> float:
    """Cluster-line offset: safely inside (0, 1/(n-1)), capped at 0.1."""
    if n < 2:
        return 0.0
    return min(1.0 / (2.0 * (n - 1)), 0.1)


def _odd_at_least(value: float, floor: int = _MIN_NODES) -> int:
    n = max(int(math.ceil(value)), floor)
    return n if n % 2 == 1 else n + 1


def _node_spacing(step_tol: float, pole_distance: float, max_rate: float) -> float:
    """Largest trapezoid spacing meeting step_tol for both error mechanisms."""
    log_tol = math.log(1.0 / step_tol)
    h_gauss = math.pi / math.sqrt(max_rate * log_tol)
    if pole_distance == math.inf:
        return h_gauss
    h_pole = 2.0 * math.pi * pole_distance / log_tol
    return min(h_gauss, h_pole)


def cluster_pole_distance(p: Partition, eps: float) -> float:
    """Vertical distance from the contour product to the nearest cluster-matrix
    pole: min over i != j of |lambda_i - (j - i) eps|.  inf for one line."""
    if p.length < 2:
        return math.inf
    best = math.inf
    for i, lam in enumerate(p.parts, start=1):
        for j in range(1, p.length + 1):
            if j != i:
                best = min(best, abs(lam - (j - i) * eps))
    return best


def auto_cluster_plan(t: float, p: Partition, x, nodes: int | None = None,
                      theta: float | None = None, epsilon: float | None = None,
                      half_width: float | None = None) -> ContourPlan:
    """Size a contour plan for one cluster integral.

    theta defaults to the envelope-minimizing abscissa shifted by -sum(x)/(nt),
    which centers the dominant Gaussian saddle for off-origin points.
    """
    pts = SpacePoints.of(x)
    n = p.n
    eps = default_epsilon(n) if epsilon is None else float(epsilon)
    if theta is None:
        theta = float(optimal_theta(p)) - sum(pts.coords) / (n * t)
    rates = [lam * t / 2.0 for lam in p.parts]
    if half_width is None:
        half_width = math.sqrt((math.log(1.0 / TAIL_TOL) + TAIL_SAFETY) / min(rates))
    if nodes is None:
        tol = _STEP_TOL[min(p.length, 4)]
        h = _node_spacing(tol, cluster_pole_distance(p, eps), max(rates))
        nodes = _odd_at_least(2.0 * half_width / h + 1.0)
    return ContourPlan(theta=float(theta), epsilon=eps, half_width=float(half_width),
                       nodes_per_line=int(nodes))


def cluster_integral(req: MomentRequest, p: Partition,
                     min_separation: float = DEFAULT_MIN_SEPARATION) -> QuadratureResult:
    """One partition's contour integral (the term nu_lambda of the expansion)."""
    if p.n != req.n:
        raise ValueError(f"partition of {p.n} against {req.n} points")
    if p.length > 4:
        raise UnsupportedDimensionError(
            f"tensor quadrature supports at most 4 contour lines, partition {p} needs {p.length}"
        )
    if p.n > MAX_TOP_SIZE:
        raise UnsupportedDimensionError(f"cluster integrals support n <= {MAX_TOP_SIZE}")
    plan = req.plan
    if plan is None:
        plan = auto_cluster_plan(req.t, p, req.x)
    if p.length >= 2:
        hi = 1.0 / (p.n - 1)
        if not (0.0 < plan.epsilon < hi):
            raise ValueError(
                f"need 0 < epsilon < 1/(n-1) = {hi:.6g} for {p.length} lines at n={p.n}, "
                f"got {plan.epsilon}"
            )
    f = cluster_integrand_batch(req.t, req.x, p, min_separation=min_separation)
    rates = tuple(lam * req.t / 2.0 for lam in p.parts)
    return integrate_tensor(f, plan, p.length, decay_rates=rates)


def cluster_breakdown(req: MomentRequest) -> tuple[tuple[Partition, QuadratureResult], ...]:
    """Every partition's integral, enumeration order (full cluster first)."""
    if req.n > MAX_SUM_SIZE:
        raise UnsupportedDimensionError(
            f"full partition sum supports n <= {MAX_SUM_SIZE}, got n={req.n}"
        )
    return tuple((p, cluster_integral(req, p)) for p in enumerate_partitions(req.n))


def combine_results(pieces) -> QuadratureResult:
    """Sum scaled values; error estimates combine additively in absolute terms."""
    total = ScaledComplex.zero()
    tail_abs = ScaledComplex.zero()
    step_abs = ScaledComplex.zero()
    for piece in pieces:
        total = total + piece.value
        mag = ScaledComplex(abs(piece.value.mantissa), piece.value.log_scale)
        tail_abs = tail_abs + mag * piece.tail_bound
        step_abs = step_abs + mag * piece.step_estimate
    if total.is_zero:
        return QuadratureResult(total, 0.0, 0.0)
    return QuadratureResult(
        value=total,
        tail_bound=tail_abs.ratio_to(total) if not tail_abs.is_zero else 0.0,
        step_estimate=step_abs.ratio_to(total) if not step_abs.is_zero else 0.0,
    )


def moment_partition_sum(req: MomentRequest) -> QuadratureResult:
    """The moment as the sum of all cluster integrals."""
    return combine_results(result for _, result in cluster_breakdown(req))


def top_cluster_integral(req: MomentRequest) -> QuadratureResult:
    """Only the full-cluster term lambda = (n): one line, feasible to n = 9."""
    return cluster_integral(req, Partition((req.n,)))


def top_cluster_closed_form(t: float, x) -> ScaledComplex:
    """Exact Gaussian evaluation of the full-cluster integral:

    (n-1)!/sqrt(2 pi n t) * exp( n(n^2-1)/24 t + sum_i x_(i)((n+1)/2 - i)
                                 - (sum x)^2 / (2 n t) ).
    """
    pts = SpacePoints.of(x)
    n = pts.n
    s = sum(pts.coords)
    pairing = sum(c * ((n + 1) / 2 - i) for i, c in enumerate(pts.ordered, start=1))
    log = (
        float(lyapunov_exponent(n)) * t
        + pairing
        - s * s / (2.0 * n * t)
        + math.lgamma(n)
        - 0.5 * math.log(2.0 * math.pi * n * t)
    )
    return ScaledComplex.from_log(log)


def leading_asymptotic(t: float, x) -> ScaledComplex:
    """Large-t leading term: (n-1)!/sqrt(2 pi n t) e^{L_n t} * ground-state factor."""
    pts = SpacePoints.of(x)
    n = pts.n
    log = (
        float(lyapunov_exponent(n)) * t
        + log_ground_state(pts)
        + math.lgamma(n)
        - 0.5 * math.log(2.0 * math.pi * n * t)
    )
    return ScaledComplex.from_log(log)


# --- nested-contour route -------------------------------------------------

DEFAULT_NESTED_SPACING = 1.5


def default_abscissas(n: int, t: float, x, spacing: float = DEFAULT_NESTED_SPACING):
    """Descending abscissas with the given gap, shifted to center the saddle."""
    if spacing <= 1.0:
        raise ValueError(f"abscissa spacing must exceed 1, got {spacing}")
    pts = SpacePoints.of(x)
    raw = [(n - k) * spacing for k in range(1, n + 1)]
    shift = -(sum(raw) / n + sum(pts.coords) / (n * t))
    return tuple(r + shift for r in raw)


def _nested_integrand(t, x_sorted, min_separation):
    npts = len(x_sorted)
    i_idx, j_idx = np.triu_indices(npts, 1)

    def f(W):
        e = (0.5 * t) * np.sum(W * W, axis=0) + x_sorted @ W
        if npts == 1:
            return np.exp(1j * e.imag), e.real
        d = W[i_idx] - W[j_idx]
        den = d - 1.0
        # poles sit at pair gaps of exactly 1; the plan keeps them at vertical
        # distance |gap - 1| but vet every node anyway
        closest = float(np.min(np.abs(den)))
        if closest < min_separation:
            from .errors import NearSingularityError

            raise NearSingularityError(
                f"nested contours came within {closest:.3e} of a pole (floor {min_separation:.1e})"
            )
        pref = np.prod(d / den, axis=0)
        return pref * np.exp(1j * e.imag), e.real

    return f


def auto_nested_plan(t: float, abscissas, nodes: int | None = None,
                     half_width: float | None = None) -> ContourPlan:
    """Grid sized from the pole distance min |gap - 1| and decay rate t/2."""
    a = tuple(float(v) for v in abscissas)
    n = len(a)
    rate = t / 2.0
    if half_width is None:
        half_width = math.sqrt((math.log(1.0 / TAIL_TOL) + TAIL_SAFETY) / rate)
    if nodes is None:
        dist = math.inf
        for i in range(n):
            for j in range(i + 1, n):
                dist = min(dist, abs((a[i] - a[j]) - 1.0))
        tol = _STEP_TOL[min(n, 4)]
        h = _node_spacing(tol, dist, rate)
        nodes = _odd_at_least(2.0 * half_width / h + 1.0)
    return ContourPlan(theta=a[0], epsilon=(a[1] - a[0]) if n > 1 else 0.0,
                       half_width=half_width, nodes_per_line=int(nodes))


def moment_nested_contours(req: MomentRequest, abscissas=None,
                           min_separation: float = DEFAULT_MIN_SEPARATION) -> QuadratureResult:
    """The moment as one n-fold integral over strictly nested contours."""
    n = req.n
    if n > MAX_SUM_SIZE:
        raise UnsupportedDimensionError(
            f"nested contours support n <= {MAX_SUM_SIZE}, got n={n}"
        )
    if abscissas is None:
        abscissas = default_abscissas(n, req.t, req.x)
    a = tuple(float(v) for v in abscissas)
    if len(a) != n:
        raise ValueError(f"need {n} abscissas, got {len(a)}")
    for i in range(n - 1):
        if not a[i] - a[i + 1] > 1.0:
            raise ValueError(
                f"abscissas must descend with gaps > 1; a[{i}]={a[i]:.6g} vs a[{i + 1}]={a[i + 1]:.6g}"
            )
    plan = req.plan if req.plan is not None else auto_nested_plan(req.t, a)
    x_sorted = np.asarray(req.x.ordered)
    f = _nested_integrand(req.t, x_sorted, min_separation)
    rates = (req.t / 2.0,) * n
    return integrate_tensor(f, plan, n, decay_rates=rates, abscissas=a)


# --- asymptotic comparison ------------------------------------------------


@dataclass(frozen=True)
class RatioResult:
    """|moment| / |leading asymptotic| with the moment's propagated error."""

    ratio: float
    error: float
    moment: QuadratureResult
    leading: ScaledComplex


def asymptotic_ratio(req: MomentRequest) -> RatioResult:
    moment = moment_partition_sum(req)
    lead = leading_asymptotic(req.t, req.x)
    ratio = math.exp(moment.value.abs_log() - lead.abs_log())
    err = ratio * (moment.tail_bound + moment.step_estimate)
    return RatioResult(ratio=ratio, error=err, moment=moment, leading=lead)
