"""Symmetrized permutation kernel and cluster integrand.

The n-point kernel is a sum over permutations sigma of

    prod_{B<A} (z_{sigma(A)} - z_{sigma(B)} - 1) / (z_{sigma(A)} - z_{sigma(B)})
    * exp( sum_i t/2 z_{sigma(i)}^2 + x_(i) z_{sigma(i)} )

with the evaluation points x sorted nondecreasing once at entry.  Individual
terms have pair poles; the symmetrized sum is entire in z.

On a cluster layout (coordinates stacked at unit spacing over l base points)
any permutation that places some value v+1 after its same-cluster predecessor
v picks up an exactly-zero numerator factor, so only interleavings that keep
each cluster's coordinates in descending order contribute: n!/prod(lambda_k!)
terms instead of n!.  Those survivors are generated directly (never filtered
out of n!), and within-cluster pair differences are kept as exact small
integers so the dropped terms really are exact zeros — the unfiltered sum is
then bit-identical to the filtered one.

Everything is batch-friendly: base points may be (l, m) arrays of contour
nodes, and per-permutation exponents are renormalized against the largest
surviving exponent before exponentiation (scaled-arithmetic contract).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NearSingularityError, NumericsError, UnsupportedDimensionError
from .partitions import Partition, cluster_slots
from .scaled import ScaledComplex
from .spectral import SpacePoints

DEFAULT_MIN_SEPARATION = 1e-8
MAX_DIRECT_SIZE = 9  # generic-point kernel: n! terms
MAX_UNFILTERED_SIZE = 7  # cluster layout with short_circuit off: n! terms
_PERM_BLOCK = 20000


@dataclass(frozen=True)
class _Term:
    perm: tuple[int, ...]
    scalar: float  # product of within-cluster pair ratios (exact 0 for dropped terms)
    cross: tuple[tuple[int, int, int], ...]  # (cluster_u, cluster_v, offset_u - offset_v)


@dataclass(frozen=True)
class _Tables:
    slots: tuple[tuple[int, int], ...]
    terms: tuple[_Term, ...]
    cross_keys: tuple[tuple[int, int, int], ...]


def _build_term(perm, slots) -> _Term:
    scalar = 1.0
    cross = []
    n = len(perm)
    for beta in range(n):
        for alpha in range(beta + 1, n):
            u, v = perm[alpha], perm[beta]
            cu, ou = slots[u]
            cv, ov = slots[v]
            if cu == cv:
                d = ou - ov  # nonzero integer; d == 1 gives the exact-zero factor
                scalar *= (d - 1.0) / d
            else:
                cross.append((cu, cv, ou - ov))
    return _Term(tuple(perm), scalar, tuple(cross))


def _label_sequences(counts):
    """Distinct sequences over cluster labels with given multiplicities, lex order."""
    counts = list(counts)
    seq = []
    total = sum(counts)

    def rec(remaining):
        if remaining == 0:
            yield tuple(seq)
            return
        for k in range(len(counts)):
            if counts[k]:
                counts[k] -= 1
                seq.append(k)
                yield from rec(remaining - 1)
                seq.pop()
                counts[k] += 1

    yield from rec(total)


@lru_cache(maxsize=None)
def _tables(parts: tuple[int, ...]) -> _Tables:
    """Surviving terms only, in permutation-lex order."""
    p = Partition(parts)
    slots = tuple(cluster_slots(p))
    starts = []
    acc = 0
    for lam in parts:
        starts.append(acc)
        acc += lam
    terms = []
    for labels in _label_sequences(parts):
        nxt = [starts[k] + parts[k] - 1 for k in range(len(parts))]
        perm = []
        for k in labels:
            perm.append(nxt[k])
            nxt[k] -= 1
        terms.append(_build_term(tuple(perm), slots))
    keys = sorted({key for t in terms for key in t.cross})
    return _Tables(slots=slots, terms=tuple(terms), cross_keys=tuple(keys))


@lru_cache(maxsize=None)
def _tables_unfiltered(parts: tuple[int, ...]) -> _Tables:
    """Every permutation of n, in lex order; dropped terms carry scalar == 0."""
    p = Partition(parts)
    if p.n > MAX_UNFILTERED_SIZE:
        raise UnsupportedDimensionError(
            f"unfiltered cluster sum needs n <= {MAX_UNFILTERED_SIZE}, got n={p.n}"
        )
    slots = tuple(cluster_slots(p))
    terms = tuple(_build_term(perm, slots) for perm in itertools.permutations(range(p.n)))
    keys = sorted({key for t in terms for key in t.cross})
    return _Tables(slots=slots, terms=terms, cross_keys=tuple(keys))


def surviving_permutations(p: Partition) -> tuple[tuple[int, ...], ...]:
    """Contributing permutations (0-based coordinate indices), lex order."""
    return tuple(t.perm for t in _tables(p.parts).terms)


def _clustered_terms(t, x_sorted, parts, W, short_circuit=True, min_separation=DEFAULT_MIN_SEPARATION):
    """Batch kernel on a cluster layout: W is (l, m) base points.

    Returns (mantissa[m], log_scale[m]).  The renormalization scale is the
    surviving-term maximum in both modes, which is what makes filtered and
    unfiltered results bit-identical.
    """
    tables = _tables(parts)
    slots = tables.slots
    n = len(slots)
    W = np.asarray(W, dtype=complex)
    if W.ndim != 2 or W.shape[0] != len(parts):
        raise ValueError(f"need base points shaped ({len(parts)}, m), got {W.shape}")
    active = tables.terms if short_circuit else _tables_unfiltered(parts).terms
    keys = tables.cross_keys if short_circuit else _tables_unfiltered(parts).cross_keys

    # cross-cluster pair ratios, one array per distinct (cluster_u, cluster_v, d)
    ratios = {}
    for cu, cv, d in keys:
        den = (W[cu] - W[cv]) + d
        closest = float(np.min(np.abs(den)))
        if closest < min_separation:
            raise NearSingularityError(
                f"coordinate pair from clusters {cu},{cv} at offset difference {d} "
                f"came within {closest:.3e} of a kernel pole (floor {min_separation:.1e})"
            )
        ratios[(cu, cv, d)] = (den - 1.0) / den

    Z = np.empty((n, W.shape[1]), dtype=complex)
    for a, (k, off) in enumerate(slots):
        Z[a] = W[k] + off
    quad = 0.5 * t * (Z * Z).sum(axis=0)  # permutation-independent

    exps = [
        sum(x_sorted[i] * Z[term.perm[i]] for i in range(n))
        for term in tables.terms
    ]
    scale = exps[0].real.copy()
    for L in exps[1:]:
        np.maximum(scale, L.real, out=scale)
    by_perm = {term.perm: L for term, L in zip(tables.terms, exps)}

    mant = np.zeros(W.shape[1], dtype=complex)
    for term in active:
        L = by_perm.get(term.perm)
        if L is None:  # dropped term, evaluated in full for the unfiltered mode
            L = sum(x_sorted[i] * Z[term.perm[i]] for i in range(n))
        pref = term.scalar
        for key in term.cross:
            pref = pref * ratios[key]
        mant += pref * np.exp(L - scale)
    mant *= np.exp(1j * quad.imag)
    return mant, quad.real + scale


def clustered_kernel(t, x, partition: Partition, w, *, short_circuit=True,
                     min_separation=DEFAULT_MIN_SEPARATION) -> ScaledComplex:
    """Kernel on the cluster layout of `partition` over base points w."""
    if partition.n > MAX_DIRECT_SIZE:
        raise UnsupportedDimensionError(
            f"cluster kernel supports n <= {MAX_DIRECT_SIZE}, got n={partition.n}"
        )
    x_sorted = np.asarray(SpacePoints.of(x).ordered)
    if x_sorted.size != partition.n:
        raise ValueError(f"got {x_sorted.size} points for partition of {partition.n}")
    W = np.asarray(w, dtype=complex).reshape(partition.length, 1)
    mant, logs = _clustered_terms(
        t, x_sorted, partition.parts, W, short_circuit=short_circuit,
        min_separation=min_separation,
    )
    return ScaledComplex(complex(mant[0]), float(logs[0])).normalize()


def permutation_kernel(t, x, z, *, min_separation=DEFAULT_MIN_SEPARATION) -> ScaledComplex:
    """Full n! kernel at generic coordinates z (no cluster structure assumed)."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    n = z.size
    if n > MAX_DIRECT_SIZE:
        raise UnsupportedDimensionError(f"direct kernel supports n <= {MAX_DIRECT_SIZE}, got {n}")
    x_sorted = np.asarray(SpacePoints.of(x).ordered)
    if x_sorted.size != n:
        raise ValueError(f"got {x_sorted.size} points for {n} coordinates")

    diff = z[:, None] - z[None, :]
    off_diag = ~np.eye(n, dtype=bool)
    if n > 1:
        closest = float(np.min(np.abs(diff[off_diag])))
        if closest < min_separation:
            raise NearSingularityError(
                f"coordinates {closest:.3e} apart, below the safety floor "
                f"{min_separation:.1e}; the summed kernel is finite there but "
                f"individual terms are not evaluable"
            )
    ratio = np.ones_like(diff)
    np.divide(diff - 1.0, diff, out=ratio, where=off_diag)
    quad = 0.5 * t * np.sum(z * z)
    b_idx, a_idx = np.triu_indices(n, 1)  # positions beta < alpha

    blocks = []
    perm_iter = itertools.permutations(range(n))
    while True:
        block = np.array(list(itertools.islice(perm_iter, _PERM_BLOCK)), dtype=np.intp)
        if block.size == 0:
            break
        blocks.append(block.reshape(-1, n))
    # two passes: global exponent maximum, then the renormalized sum
    scale = -math.inf
    for block in blocks:
        L = z[block] @ x_sorted
        scale = max(scale, float(L.real.max()))
    total = 0j
    for block in blocks:
        L = z[block] @ x_sorted
        pref = np.prod(ratio[block[:, a_idx], block[:, b_idx]], axis=1)
        total += complex((pref * np.exp(L - scale)).sum())
    total *= complex(math.cos(quad.imag), math.sin(quad.imag))
    return ScaledComplex(total, quad.real + scale).normalize()


def cluster_determinant(w, parts) -> complex:
    """det of the l x l cluster matrix [1/(w_i + lambda_i - w_j)] by pivoted LU."""
    parts = parts.parts if isinstance(parts, Partition) else tuple(parts)
    W = np.asarray(w, dtype=complex).reshape(len(parts), 1)
    det = complex(_cluster_determinant_batch(W, parts)[0])
    if not (math.isfinite(det.real) and math.isfinite(det.imag)) or det == 0:
        raise NumericsError(f"cluster matrix singular for w={list(w)}, parts={parts}: det={det}")
    return det


def _cluster_determinant_batch(W, parts):
    lam = np.asarray(parts, dtype=float)
    A = 1.0 / ((W[:, None, :] + lam[:, None, None]) - W[None, :, :])  # (i, j, m)
    return np.linalg.det(np.moveaxis(A, 2, 0))


def cauchy_determinant(u, v) -> complex:
    """det [1/(u_i - v_j)] in product form:
    prod_{i<j} (u_i-u_j)(v_j-v_i) / prod_{i,j} (u_i-v_j).
    """
    u = np.asarray(u, dtype=complex).reshape(-1)
    v = np.asarray(v, dtype=complex).reshape(-1)
    if u.size != v.size:
        raise ValueError(f"need equally many u and v, got {u.size} and {v.size}")
    cross = u[:, None] - v[None, :]
    if np.any(cross == 0):
        raise NumericsError("cauchy matrix singular: some u_i equals some v_j")
    i, j = np.triu_indices(u.size, 1)
    num = complex(np.prod((u[i] - u[j]) * (v[j] - v[i])))
    return num / complex(np.prod(cross))


def cluster_integrand(t, x, partition: Partition, w) -> ScaledComplex:
    """One integrand sample: det * kernel / multiplicity at base points w."""
    det = cluster_determinant(w, partition)
    kern = clustered_kernel(t, x, partition, w)
    return kern * (det / partition.multiplicity)


def cluster_integrand_batch(t, x, partition: Partition, min_separation=DEFAULT_MIN_SEPARATION):
    """Vectorized integrand f(W) -> (mantissa, log_scale) for integrate_tensor."""
    x_sorted = np.asarray(SpacePoints.of(x).ordered)
    if x_sorted.size != partition.n:
        raise ValueError(f"got {x_sorted.size} points for partition of {partition.n}")
    parts = partition.parts
    inv_mult = 1.0 / partition.multiplicity

    def f(W):
        mant, logs = _clustered_terms(t, x_sorted, parts, W, min_separation=min_separation)
        det = _cluster_determinant_batch(W, parts)
        return mant * det * inv_mult, logs

    return f
