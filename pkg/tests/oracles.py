"""Reference implementations used only by the tests.

Each oracle is written from the model description directly and shares no
code with the package, so agreement between the two is evidence rather
than tautology.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy import linalg

# genotype (A allele?, B allele?) -> type index 0=ab, 1=Ab, 2=aB, 3=AB
GENOTYPE_TYPE = {(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 3}
TYPE_GENOTYPE = {v: k for k, v in GENOTYPE_TYPE.items()}
CHANNELS = [(0, 1), (0, 2), (0, 3), (1, 0), (1, 2), (1, 3),
            (2, 0), (2, 1), (2, 3), (3, 0), (3, 1), (3, 2)]


def individual_rates(counts, mu, s, r):
    """Type-transition rates from an explicit list of individuals.

    Every individual dies at rate 1, 1-s or 1-2s by its number of
    beneficial alleles and is replaced by a copy of a uniformly chosen
    individual (probability 1-r) or by a recombinant taking the a/A allele
    from one uniformly chosen individual and the b/B allele from another
    independent one (probability r).  Each a and each b allele mutates at
    rate mu.  Returns a dict ``(src, dst) -> rate``.
    """
    pop = [TYPE_GENOTYPE[t] for t, c in enumerate(counts) for _ in range(c)]
    n = len(pop)
    rates = {ch: 0.0 for ch in CHANNELS}
    for i, gi in enumerate(pop):
        death = 1.0 - s * (gi[0] + gi[1])
        src = GENOTYPE_TYPE[gi]
        for gj in pop:
            dst = GENOTYPE_TYPE[gj]
            if dst != src:
                rates[(src, dst)] += death * (1.0 - r) / n
        for gj in pop:
            for gk in pop:
                dst = GENOTYPE_TYPE[(gj[0], gk[1])]
                if dst != src:
                    rates[(src, dst)] += death * r / (n * n)
        if gi[0] == 0:
            rates[(src, GENOTYPE_TYPE[(1, gi[1])])] += mu
        if gi[1] == 0:
            rates[(src, GENOTYPE_TYPE[(gi[0], 1)])] += mu
    return rates


def compositions(n):
    """All ``(x0, x1, x2, x3)`` with nonnegative entries summing to ``n``."""
    for x1 in range(n + 1):
        for x2 in range(n + 1 - x1):
            for x3 in range(n + 1 - x1 - x2):
                yield (n - x1 - x2 - x3, x1, x2, x3)


def generator_matrix(n, mu, s, r):
    """Generator of the type-count chain built from :func:`individual_rates`."""
    states = list(compositions(n))
    index = {st: i for i, st in enumerate(states)}
    Q = np.zeros((len(states), len(states)))
    for st in states:
        i = index[st]
        for (src, dst), rate in individual_rates(st, mu, s, r).items():
            if rate == 0.0:
                continue
            nxt = list(st)
            nxt[src] -= 1
            nxt[dst] += 1
            Q[i, index[tuple(nxt)]] += rate
        Q[i, i] = -Q[i].sum()
    return states, index, Q


def absorption_probabilities(n, mu, s, r, start):
    """P(absorb in each absorbing state | start) for the exact chain."""
    states, index, Q = generator_matrix(n, mu, s, r)
    absorbing = [i for i in range(len(states)) if Q[i, i] == 0.0]
    transient = [i for i in range(len(states)) if Q[i, i] != 0.0]
    if index[start] in absorbing:
        return {states[index[start]]: 1.0}
    QT = Q[np.ix_(transient, transient)]
    QA = Q[np.ix_(transient, absorbing)]
    B = np.linalg.solve(-QT, QA)
    row = B[transient.index(index[start])]
    return {states[a]: float(p) for a, p in zip(absorbing, row)}


def expected_fixation_time(n, mu, s, r, start):
    """E[first time all individuals are AB] from ``start`` (needs mu > 0)."""
    states, index, Q = generator_matrix(n, mu, s, r)
    target = index[(0, 0, 0, n)]
    others = [i for i in range(len(states)) if i != target]
    A = Q[np.ix_(others, others)]
    m = np.linalg.solve(A, -np.ones(len(others)))
    return float(m[others.index(index[start])])


def transition_probabilities(n, mu, s, r, start, t):
    states, index, Q = generator_matrix(n, mu, s, r)
    P = linalg.expm(Q * t)
    return states, P[index[start]]


# ---------------------------------------------------------------------------
# lineage-resolved rates as written in the model description


def closed_form_subtype_rates(counts, cls, mu, s, r):
    """Founder and per-class rates for classes 1m, 3m and the founder
    creations, from their closed forms.

    ``cls`` maps class names to counts.
    """
    n = sum(counts)
    x0, x1, x2, x3 = counts
    z0, z1, z2, z3 = (c / n for c in counts)
    z1m, z3m = cls["1m"] / n, cls["3m"] / n
    X1r, X2r, X3r, X0r = cls["1r"], cls["2r"], cls["3r"], cls["0r"]
    out = {}
    out["M1"] = mu * x0
    out["M3"] = mu * (x1 + x2)
    out["B1m"] = (z0 + (1 - s) * (z1 - z1m) + (1 - s) * z2 + (1 - 2 * s) * z3) * (1 - r * z2)
    out["D1m"] = (1 - s) * (1 - z1m + r * z2 * z1m) + mu
    out["B3m"] = (z0 + (1 - s) * (z1 + z2) + (1 - 2 * s) * (z3 - z3m)) * (1 - r * z0)
    out["D3m"] = (1 - 2 * s) * (1 - z3m + r * z0 * z3m)
    out["R1"] = (x0 + (1 - s) * (x1 - X1r) + (1 - s) * x2 + (1 - 2 * s) * x3) * r * z0 * z3
    out["R2"] = (x0 + (1 - s) * x1 + (1 - s) * (x2 - X2r) + (1 - 2 * s) * x3) * r * z0 * z3
    out["R3"] = (x0 + (1 - s) * (x1 + x2) + (1 - 2 * s) * (x3 - X3r)) * r * z1 * z2
    out["R0"] = ((x0 - X0r) + (1 - s) * (x1 + x2) + (1 - 2 * s) * x3) * r * z1 * z2
    return out


# ---------------------------------------------------------------------------
# constant chain, written out again from the defining displays


def constant_chain(eps, delta, con22_C=1.0, slack=0.01):
    up = 1 + slack
    d2 = delta ** 2
    c = {}
    c["K"] = up * 6 / eps
    K = c["K"]
    c["C1"] = up * max(math.log(5 * K / eps), math.log(8 / d2))
    C1 = c["C1"]
    c["C0m"] = up * 2 * math.log(2 * K / eps)
    c["C0m_plus"] = up * max(c["C0m"],
                             14 * math.exp(-C1) + math.log(48 * K / (eps * (1 - d2) ** 2)))
    c["C0r"] = up * max(math.log(K ** 2 / eps), C1 + math.log(4))
    c["eta"] = 2 * K * math.exp(-C1)
    c["C2"] = -C1 + math.log(math.exp(C1) / (2 * (1 + d2)) - 1) + math.log(1 / d2 - 1)
    C2 = c["C2"]
    c["K1r_plus"] = K ** 2 * math.exp(-2 * C1) * (2 * (c["C0r"] - C1) + 1) / eps
    c["K1m_plus"] = (4 * K * math.exp(-2 * C1 + c["C0m"])
                     + K ** 2 * math.exp(-2 * C1) * (2 * (c["C0r"] - C1) + 1) * con22_C) / (2 * eps)
    c["K1r_minus"] = (math.exp(-7 * math.exp(-C1)) * (1 - 5 * math.exp(-C1)) * (1 - d2) ** 2
                      * math.exp(-2 * C1) / 3)
    c["K1m_minus"] = ((1 - d2) * math.exp(-7 * math.exp(-C1) - 2 * C1 - c["C0m_plus"])
                      - math.sqrt(48 * K * math.exp(c["C0m_plus"]) / eps)
                      * math.exp(-2 * C1 - 2 * c["C0m_plus"]))
    c["K0r"] = 2 * math.exp(2 * (C2 + C1)) * c["K1r_plus"]
    c["K0m"] = 2 * math.exp(2 * (C2 + C1)) * c["K1m_plus"]
    c["Kp1"] = math.exp(2 * (C2 + C1)) * (C2 + C1)
    c["Kp2"] = math.exp(3 * (C2 + C1)) * (C2 + C1)
    c["K2r_plus"] = 2 * c["K1r_plus"] * math.exp(2 * (C2 + C1))
    c["K2m_plus"] = 2 * c["K1m_plus"] * math.exp(2 * (C2 + C1))
    c["K2r_minus"] = c["K1r_minus"] / 2
    c["K2m_minus"] = c["K1m_minus"] / 2
    for tag in ("r", "m"):
        c3 = C2 - 3 - math.log(c[f"K2{tag}_plus"] / d2)
        k3 = c[f"K2{tag}_minus"] * math.exp((c3 - C2) - 2) / 2
        c[f"C3_{tag}"] = c3
        c[f"K3_{tag}"] = k3
        c[f"C4_{tag}"] = c3 + math.log((1 / d2 - 1) * (1 / k3 - 1))
    return c


def chain_inequalities(c, eps, delta):
    """The strict inequalities every chain must satisfy, as booleans."""
    d2 = delta ** 2
    K, C1 = c["K"], c["C1"]
    return {
        "eps range": 0 < eps < 1 / 16,
        "delta range": 0 < delta < 1 / 4,
        "K": K > 6 / eps,
        "C1": C1 > max(math.log(5 * K / eps), math.log(8 / d2)),
        "C0m": c["C0m"] > 2 * math.log(2 * K / eps),
        "C0m+": c["C0m_plus"] > max(c["C0m"], 14 * math.exp(-C1)
                                    + math.log(48 * K / (eps * (1 - d2) ** 2))),
        "C0r": c["C0r"] > max(math.log(K ** 2 / eps), C1 + math.log(4)),
        "eta < 2eps/5": c["eta"] < 2 * eps / 5,
        "eta < 1/16": c["eta"] < 1 / 16,
        "K1r- > 0": c["K1r_minus"] > 0,
        "K1m- > 0": c["K1m_minus"] > 0,
        "K3_r in (0,1)": 0 < c["K3_r"] < 1,
        "K3_m in (0,1)": 0 < c["K3_m"] < 1,
    }


# ---------------------------------------------------------------------------
# gambler's ruin by first-step analysis


def ruin_linear_system(level_up, start, q):
    """Solve ``h(k) = p_down h(k-1) + p_up h(k+1)``, ``h(0)=1``, ``h(L)=0``."""
    L = level_up
    if start in (0, L):
        return 1.0 if start == 0 else 0.0
    pd, pu = q / (1 + q), 1 / (1 + q)
    m = L - 1
    ab = np.zeros((3, m))
    ab[0, 1:] = -pu      # superdiagonal
    ab[1, :] = 1.0       # diagonal
    ab[2, :-1] = -pd     # subdiagonal
    rhs = np.zeros(m)
    rhs[0] = pd
    h = linalg.solve_banded((1, 1), ab, rhs)
    return float(h[start - 1])


def all_states_up_to(nmax):
    for n in range(2, nmax + 1):
        yield from ((n, st) for st in compositions(n))


def product_grid(*axes):
    return list(itertools.product(*axes))
