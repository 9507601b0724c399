"""
Lossless encoding of a quantum source
=====================================

Build the lossless code of a density operator (Shannon words over the
eigenbasis), check the condensability Kraft sum on orthogonal families
of superpositions, and sweep the lossy many-copy projection.
"""

from qfock import (
    QString,
    average_length,
    density_from_ensemble,
    encode_qstring,
    kraft_condensable_check,
    lossy_typical_projection,
    sw_report,
)

# A qubit source with eigenvalues 3/4 and 1/4.
rho = density_from_ensemble(
    [(0.75, QString({"0": 1.0})), (0.25, QString({"1": 1.0}))]
)
code, rep = sw_report(rho)
print("codeword lengths:", [l for _, l in rep.per_member])
print(f"E[len] = {rep.expected_avg_length}  S = {rep.entropy:.6f}")
print("kraft  =", rep.kraft)

# The code is an isometry on its span, so superpositions of source
# members encode to superpositions of codewords.
mix = QString({"0": 0.8, "1": 0.6})
enc = encode_qstring(code, mix)
print("encoded superposition:", enc, "avg len", average_length(enc))

# %% Kraft for average lengths
#
# For pairwise-orthogonal families the sum of 2**-avg_len still obeys
# Kraft.  With half-and-half superpositions of '0' and '10' plus the
# leftover '11', the sum lands strictly below 1.
fam = [
    QString({"0": 2**-0.5, "10": 2**-0.5}),
    QString({"0": 2**-0.5, "10": -(2**-0.5)}),
    QString({"11": 1.0}),
]
print("condensable kraft:", kraft_condensable_check(fam))

# %% Lossy projection of n copies
#
# Keep only m = ceil(n (S + delta)) qubits of the block-encoded n-copy
# source and measure how much probability weight survives.
rho9 = density_from_ensemble(
    [(0.9, QString({"0": 1.0})), (0.1, QString({"1": 1.0}))]
)
for n in (10, 20, 40, 60):
    r = lossy_typical_projection(rho9, n, 0.1)
    print(
        f"n={r.n:2d} budget={r.budget:2d} "
        f"success={r.success:.6f} kept {r.kept_classes}/{r.total_classes}"
    )
