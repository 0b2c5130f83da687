"""JIT-compiled hot loops shared by :mod:`model` and :mod:`simulator`.

Everything here works on plain integers, floats and preallocated numpy
buffers so the event loops never allocate per event.
"""

import numpy as np
from numba import njit

# termination codes returned by the event loops
RUNNING = 0
FIXED = 1
TIME_CAP = 2
EVENT_CAP = 3
ABSORBED = 4
NEED_SAMPLES = 5

N_CHANNELS = 12

# (source type, target type) of each aggregated channel, in channel order
CHANNEL_SRC = np.array([0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3], dtype=np.int64)
CHANNEL_DST = np.array([1, 2, 3, 0, 2, 3, 0, 1, 3, 0, 1, 2], dtype=np.int64)

# lineage classes: 0f, 0r, 1m, 1r, 2m, 2r, 3m, 3r
N_CLASSES = 8
CLASS_TYPE = np.array([0, 0, 1, 1, 2, 2, 3, 3], dtype=np.int64)
C0F, C0R, C1M, C1R, C2M, C2R, C3M, C3R = range(8)


@njit(cache=True, nogil=True)
def fill_rates(x0, x1, x2, x3, n, mu, s, r, out):
    """Write the twelve aggregated channel rates into ``out``; return the total."""
    inv = 1.0 / n
    z0 = x0 * inv
    z1 = x1 * inv
    z2 = x2 * inv
    z3 = x3 * inv
    q = 1.0 - r
    f0 = q * z0 + r * (z0 + z1) * (z0 + z2)
    f1 = q * z1 + r * (z1 + z3) * (z0 + z1)
    f2 = q * z2 + r * (z0 + z2) * (z2 + z3)
    f3 = q * z3 + r * (z1 + z3) * (z2 + z3)
    d0 = 1.0 * x0
    d1 = (1.0 - s) * x1
    d2 = (1.0 - s) * x2
    d3 = (1.0 - 2.0 * s) * x3
    out[0] = d0 * f1 + mu * x0
    out[1] = d0 * f2 + mu * x0
    out[2] = d0 * f3
    out[3] = d1 * f0
    out[4] = d1 * f2
    out[5] = d1 * f3 + mu * x1
    out[6] = d2 * f0
    out[7] = d2 * f1
    out[8] = d2 * f3 + mu * x2
    out[9] = d3 * f0
    out[10] = d3 * f1
    out[11] = d3 * f2
    total = 0.0
    for k in range(N_CHANNELS):
        total += out[k]
    return total


@njit(cache=True, nogil=True)
def _select(weights, m, u):
    # linear scan; falls back to the last positive weight on round-off
    acc = 0.0
    last = -1
    for k in range(m):
        w = weights[k]
        if w > 0.0:
            acc += w
            last = k
            if u < acc:
                return k
    return last


@njit(cache=True, nogil=True)
def run_aggregate(
    counts, t, t_pending, events, gen, n, mu, s, r, max_time, max_events,
    sample_times, si, extendable, buf_t, buf_x, bi,
):
    """Gillespie loop on the aggregated four-type chain.

    ``counts`` is updated in place.  Grid samples (the cadlag state at each
    ``sample_times[si:]`` point) are written to ``buf_t``/``buf_x``, which
    must have room for every remaining grid point.  When ``extendable`` is
    set and the grid runs out, the already drawn next event time is handed
    back as ``t_pending`` so the caller can append grid points and resume
    without consuming extra random numbers.

    Returns ``(status, t, t_pending, events, si, bi)``.
    """
    rates = np.empty(N_CHANNELS)
    x0 = counts[0]
    x1 = counts[1]
    x2 = counts[2]
    x3 = counts[3]
    ns = sample_times.shape[0]
    status = RUNNING
    while True:
        if x3 == n:
            status = FIXED
            break
        if events >= max_events:
            status = EVENT_CAP
            break
        total = fill_rates(x0, x1, x2, x3, n, mu, s, r, rates)
        if total <= 0.0:
            status = ABSORBED
            break
        if t_pending >= 0.0:
            t_new = t_pending
            t_pending = -1.0
        else:
            t_new = t + gen.standard_exponential() / total
        while si < ns and sample_times[si] < t_new and sample_times[si] <= max_time:
            buf_t[bi] = sample_times[si]
            buf_x[bi, 0] = x0
            buf_x[bi, 1] = x1
            buf_x[bi, 2] = x2
            buf_x[bi, 3] = x3
            bi += 1
            si += 1
        if extendable and si == ns and t_new <= max_time:
            t_pending = t_new
            status = NEED_SAMPLES
            break
        if t_new > max_time:
            t = max_time
            status = TIME_CAP
            break
        k = _select(rates, N_CHANNELS, gen.random() * total)
        src = CHANNEL_SRC[k]
        dst = CHANNEL_DST[k]
        if src == 0:
            x0 -= 1
        elif src == 1:
            x1 -= 1
        elif src == 2:
            x2 -= 1
        else:
            x3 -= 1
        if dst == 0:
            x0 += 1
        elif dst == 1:
            x1 += 1
        elif dst == 2:
            x2 += 1
        else:
            x3 += 1
        t = t_new
        events += 1
    counts[0] = x0
    counts[1] = x1
    counts[2] = x2
    counts[3] = x3
    return status, t, t_pending, events, si, bi


@njit(cache=True, nogil=True)
def newborn_class(p, q):
    """Lineage class of a recombinant taking its a/A allele from a parent of
    class ``p`` and its b/B allele from a parent of class ``q``."""
    tp = CLASS_TYPE[p]
    tq = CLASS_TYPE[q]
    has_a = tp == 1 or tp == 3
    has_b = tq == 2 or tq == 3
    if has_a and not has_b:
        if tp == 1:
            return p
        if tq == 1:
            return q
        return C1R
    if has_b and not has_a:
        if tq == 2:
            return q
        if tp == 2:
            return p
        return C2R
    if has_a and has_b:
        if tp == 3:
            return p
        if tq == 3:
            return q
        return C3R
    if tp == 0:
        return p
    if tq == 0:
        return q
    return C0R


@njit(cache=True, nogil=True)
def _death_weight(c, s):
    tc = CLASS_TYPE[c]
    if tc == 0:
        return 1.0
    if tc == 3:
        return 1.0 - 2.0 * s
    return 1.0 - s


@njit(cache=True, nogil=True)
def run_lineage(
    cls, t, t_pending, events, gen, n, mu, s, r, max_time, max_events,
    sample_times, si, extendable, buf_t, buf_x, bi,
):
    """Individual-level Gillespie loop over the eight lineage classes.

    Every death (replaced by a newborn drawn per the replacement rule) and
    every allele mutation is an event; events that leave the class counts
    unchanged are drawn but not counted.  ``buf_x`` rows hold class counts.
    Same calling convention and return value as :func:`run_aggregate`.
    """
    w = np.empty(N_CLASSES)
    ns = sample_times.shape[0]
    status = RUNNING
    while True:
        x0 = cls[C0F] + cls[C0R]
        x1 = cls[C1M] + cls[C1R]
        x2 = cls[C2M] + cls[C2R]
        x3 = cls[C3M] + cls[C3R]
        if x3 == n:
            status = FIXED
            break
        if events >= max_events:
            status = EVENT_CAP
            break
        if (x0 == n or x1 == n or x2 == n) and mu == 0.0:
            status = ABSORBED
            break
        death_total = x0 + (1.0 - s) * (x1 + x2) + (1.0 - 2.0 * s) * x3
        mut_total = mu * (2.0 * x0 + x1 + x2)
        total = death_total + mut_total
        if t_pending >= 0.0:
            t_new = t_pending
            t_pending = -1.0
        else:
            t_new = t + gen.standard_exponential() / total
        while si < ns and sample_times[si] < t_new and sample_times[si] <= max_time:
            buf_t[bi] = sample_times[si]
            for c in range(N_CLASSES):
                buf_x[bi, c] = cls[c]
            bi += 1
            si += 1
        if extendable and si == ns and t_new <= max_time:
            t_pending = t_new
            status = NEED_SAMPLES
            break
        if t_new > max_time:
            t = max_time
            status = TIME_CAP
            break
        t = t_new
        u = gen.random() * total
        if u < mut_total:
            for c in range(N_CLASSES):
                tc = CLASS_TYPE[c]
                if tc == 0:
                    w[c] = 2.0 * mu * cls[c]
                elif tc == 3:
                    w[c] = 0.0
                else:
                    w[c] = mu * cls[c]
            c = _select(w, N_CLASSES, gen.random() * mut_total)
            if CLASS_TYPE[c] == 0:
                new = C1M if gen.random() < 0.5 else C2M
            else:
                new = C3M
        else:
            for c in range(N_CLASSES):
                w[c] = _death_weight(c, s) * cls[c]
            c = _select(w, N_CLASSES, gen.random() * death_total)
            for k in range(N_CLASSES):
                w[k] = cls[k]
            p = _select(w, N_CLASSES, gen.random() * n)
            if gen.random() < r:
                q = _select(w, N_CLASSES, gen.random() * n)
                new = newborn_class(p, q)
            else:
                new = p
        if new != c:
            cls[c] -= 1
            cls[new] += 1
            events += 1
    return status, t, t_pending, events, si, bi
