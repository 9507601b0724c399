"""Shared generators and independent oracles for the test suite."""

import math

import numpy as np

from qfock import QString, make_qstring


def random_unitary(rng, dim):
    """Haar-ish unitary from the QR of a complex Ginibre sample."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    # fix the phase ambiguity so the result is deterministic
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_qstring(rng, max_len=6, max_terms=4):
    """Random normalized superposition over distinct short bitstrings."""
    n_terms = int(rng.integers(1, max_terms + 1))
    pool = [""]
    for length in range(1, max_len + 1):
        pool.extend(format(v, f"0{length}b") for v in range(1 << length))
    picks = rng.choice(len(pool), size=n_terms, replace=False)
    amps = rng.standard_normal(n_terms) + 1j * rng.standard_normal(n_terms)
    return make_qstring(
        {pool[int(i)]: complex(a) for i, a in zip(picks, amps)}, normalize=True
    )


def random_orthonormal_family(rng, size, length=None):
    """`size` orthonormal QStrings over fixed-length basis strings."""
    if length is None:
        length = max(1, (size - 1).bit_length())
    if size > (1 << length):
        raise ValueError("family too large for the basis length")
    labels = [format(v, f"0{length}b") for v in range(1 << length)]
    u = random_unitary(rng, 1 << length)
    family = []
    for k in range(size):
        terms = {
            labels[i]: complex(u[i, k])
            for i in range(len(labels))
            if abs(u[i, k]) > 1e-12
        }
        family.append(QString(terms, normalize=True))
    return family


def prefix_free(words):
    """Quadratic independent check that no word prefixes another."""
    for a in words:
        for b in words:
            if a != b and b.startswith(a):
                return False
    return True


def binomial_tail_success(p, n, budget):
    """P[ceil(-log2 (p^i q^(n-i))) <= budget] for a diagonal qubit source.

    Enumerates the n+1 sectors directly; used as an oracle against
    lossy_typical_projection for two-level diagonal densities.
    """
    q = 1.0 - p
    total = 0.0
    for i in range(n + 1):
        logp = i * math.log2(p) + (n - i) * math.log2(q)
        v = -logp
        r = round(v)
        if abs(v - r) <= 1e-9:
            v = float(r)
        if max(0, math.ceil(v)) <= budget:
            total += math.comb(n, i) * (p**i) * (q ** (n - i))
    return min(total, 1.0)
