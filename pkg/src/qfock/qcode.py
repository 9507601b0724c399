"""Condensable quantum codes: prefix codes extended linearly to states.

A condensable code fixes an orthonormal source basis and a prefix-free
classical codeword for each basis member; the encoder is the isometry
that sends basis member k to the deterministic string |w_k> and extends
linearly.  Because the codewords are prefix-free, the images of
orthogonal states remain distinguishable even though their lengths
differ, and the average lengths of any orthogonal family of encoded
states satisfy the Kraft-style bound ``sum 2**-avg_len <= 1``.

``sw_lossless_code`` instantiates the classic lossless construction for
a density operator: codewords are canonical prefix codewords with
lengths ``ceil(-log2 eigenvalue)`` over the operator's eigenbasis, so
the expected encoded length of the eigen-ensemble lands within one bit
above the von Neumann entropy.

``lossy_typical_projection`` evaluates the induced fixed-budget lossy
scheme on n copies analytically over type classes; nothing of size 2**n
is ever materialized.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .codes import PrefixCode, canonical_prefix_code, ceil_neg_log2, kraft_sum
from .errors import (
    ArityMismatchError,
    InvalidDeltaError,
    NotOrthogonalError,
    NotOrthonormalError,
    OutOfSpanError,
)
from .fock import QString, average_length, inner_product
from .linalg import (
    DensityOperator,
    eig_hermitian,
    entropy_of_spectrum,
)

ORTHO_TOL = 1e-8
SPAN_TOL = 1e-8
AMP_FLOOR = 1e-12
EIG_FLOOR = 1e-12


def _check_orthonormal(states: Sequence[QString], tol: float = ORTHO_TOL) -> None:
    for i, a in enumerate(states):
        norm = inner_product(a, a).real
        if abs(norm - 1.0) > tol:
            raise NotOrthonormalError(f"member {i} has squared norm {norm!r}")
        for j in range(i + 1, len(states)):
            ov = inner_product(a, states[j])
            if abs(ov) > tol:
                raise NotOrthonormalError(
                    f"members {i} and {j} overlap by {abs(ov):.3e}"
                )


class CondensableCode:
    """An orthonormal source basis plus aligned prefix-free codewords."""

    __slots__ = ("_basis", "_words")

    def __init__(self, source_basis: Sequence[QString], words: PrefixCode) -> None:
        basis = tuple(source_basis)
        if not basis:
            raise ArityMismatchError("source basis is empty")
        if sorted(words.table) != list(range(len(basis))):
            raise ArityMismatchError(
                f"codewords must be indexed 0..{len(basis) - 1} to match the basis"
            )
        _check_orthonormal(basis)
        self._basis = basis
        self._words = words

    @property
    def source_basis(self) -> tuple[QString, ...]:
        return self._basis

    @property
    def words(self) -> PrefixCode:
        return self._words

    def __len__(self) -> int:
        return len(self._basis)


def build_condensable_code(
    source_basis: Sequence[QString], words: PrefixCode | dict[int, str]
) -> CondensableCode:
    if not isinstance(words, PrefixCode):
        words = PrefixCode(words)
    return CondensableCode(source_basis, words)


def encode_qstring(code: CondensableCode, state: QString) -> QString:
    """Apply the code isometry to a state in the span of the source basis."""
    coeffs = [inner_product(b, state) for b in code.source_basis]
    captured = sum(abs(c) ** 2 for c in coeffs)
    if 1.0 - captured > SPAN_TOL:
        raise OutOfSpanError(
            f"state leaves the code span; residual {1.0 - captured:.3e}"
        )
    terms = {
        code.words.codeword(k): c
        for k, c in enumerate(coeffs)
        if abs(c) > AMP_FLOOR
    }
    return QString(terms, normalize=True)


def sw_lossless_code(rho: DensityOperator) -> CondensableCode:
    """Lossless code for ``rho``: canonical codewords of length
    ``ceil(-log2 eigenvalue)`` over its eigenbasis.

    Eigenvalues below ``EIG_FLOOR`` are dropped together with their
    eigenvectors; they carry no weight at working precision.
    """
    dec = eig_hermitian(rho)
    kept = [
        (float(lam), dec.eigenvectors[:, k])
        for k, lam in enumerate(dec.eigenvalues)
        if lam >= EIG_FLOOR
    ]
    if not kept:
        raise ArityMismatchError("operator has no eigenvalue above the floor")
    basis_states = []
    for _, vec in kept:
        terms = {
            rho.basis[i]: complex(vec[i])
            for i in range(rho.dim)
            if abs(vec[i]) > AMP_FLOOR
        }
        basis_states.append(QString(terms, normalize=True))
    lengths = [ceil_neg_log2(lam) for lam, _ in kept]
    return CondensableCode(basis_states, canonical_prefix_code(lengths))


@dataclass(frozen=True)
class CompressionReport:
    """Expected encoded length of a source against its entropy."""

    expected_avg_length: float
    entropy: float
    kraft: float
    per_member: tuple[tuple[int, float], ...]


def compression_report(
    code: CondensableCode, probs: Sequence[float]
) -> CompressionReport:
    """Report for encoding source member k with probability ``probs[k]``.

    Encoding a basis member yields a single codeword string, so its
    average length after encoding is just the codeword length.
    """
    if len(probs) != len(code):
        raise ArityMismatchError(
            f"{len(probs)} probabilities for a {len(code)}-member basis"
        )
    p = [float(x) for x in probs]
    lengths = [len(code.words.codeword(k)) for k in range(len(code))]
    expected = sum(x * l for x, l in zip(p, lengths))
    total = sum(p)
    entropy = -sum(x * math.log2(x / total) for x in p if x > 0.0)
    return CompressionReport(
        expected_avg_length=float(expected),
        entropy=float(entropy),
        kraft=kraft_sum(lengths),
        per_member=tuple((k, float(l)) for k, l in enumerate(lengths)),
    )


def sw_report(rho: DensityOperator) -> tuple[CondensableCode, CompressionReport]:
    """Build the lossless code of ``rho`` and report it on the eigen-ensemble."""
    code = sw_lossless_code(rho)
    dec = eig_hermitian(rho)
    probs = [float(lam) for lam in dec.eigenvalues if lam >= EIG_FLOOR]
    return code, compression_report(code, probs)


def kraft_condensable_check(states: Sequence[QString]) -> float:
    """Kraft sum ``sum 2**-avg_len`` over a pairwise orthogonal family."""
    states = list(states)
    if not states:
        raise ValueError("no states given")
    for i, a in enumerate(states):
        for j in range(i + 1, len(states)):
            ov = inner_product(a, states[j])
            if abs(ov) > ORTHO_TOL:
                raise NotOrthogonalError(
                    f"states {i} and {j} overlap by {abs(ov):.3e}"
                )
    return float(sum(2.0 ** -average_length(s) for s in states))


@dataclass(frozen=True)
class LossyReport:
    """Outcome of projecting n encoded copies onto a qubit budget."""

    n: int
    delta: float
    entropy: float
    budget: int
    success: float
    kept_classes: int
    total_classes: int
    kept_dimension: int
    trivial: bool


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative ints summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def lossy_typical_projection(
    rho: DensityOperator, n: int, delta: float
) -> LossyReport:
    """Project the blockwise-encoded n-copy source onto ``m`` qubits.

    Each n-symbol eigenstring gets a whole-string codeword of length
    ``ceil(-log2 p(string))``; the budget is ``m = ceil(n (S + delta))``
    qubits, and the success probability is the total weight of strings
    whose codeword fits.  Counting runs over type classes, so the cost
    grows polynomially in n.

    A budget of at least ``n log2 dim`` qubits covers even the raw,
    uncompressed block; that case is reported as trivial with success 1
    rather than treated as an error.
    """
    if delta <= 0.0:
        raise InvalidDeltaError(f"delta must be positive, got {delta!r}")
    n = int(n)
    if not 1 <= n <= 64:
        raise ValueError(f"copy count must be in 1..64, got {n}")
    dec = eig_hermitian(rho)
    lams = [float(lam) for lam in dec.eigenvalues if lam >= EIG_FLOOR]
    entropy = entropy_of_spectrum(dec.eigenvalues)
    budget = math.ceil(n * (entropy + delta) - 1e-12)
    raw_qubits = n * math.log2(rho.dim)
    trivial = budget >= raw_qubits - 1e-12

    d_eff = len(lams)
    total_classes = math.comb(n + d_eff - 1, d_eff - 1)
    kept_classes = 0
    kept_dimension = 0
    success = 0.0
    for counts in _compositions(n, d_eff):
        logp = sum(k * math.log2(lam) for k, lam in zip(counts, lams) if k)
        v = -logp
        r = round(v)
        if abs(v - r) <= 1e-9:
            v = float(r)
        length = max(0, math.ceil(v))
        if length <= budget:
            mult = math.factorial(n)
            for k in counts:
                mult //= math.factorial(k)
            kept_classes += 1
            kept_dimension += mult
            success += mult * (2.0 ** logp)
    if trivial:
        success = 1.0
    return LossyReport(
        n=n,
        delta=float(delta),
        entropy=entropy,
        budget=budget,
        success=float(min(success, 1.0)),
        kept_classes=kept_classes,
        total_classes=total_classes,
        kept_dimension=kept_dimension,
        trivial=trivial,
    )
