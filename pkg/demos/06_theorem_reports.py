"""
Structured reports: copies, nonadditivity, entropy sandwich
===========================================================

Three experiment drivers that package the headline calculations into
frozen report objects: the n-copy length table, the pigeonhole search
for nonadditive superpositions, and the entropy bounds on expected
description length.
"""

import math

from qfock import (
    Ensemble,
    MachineCatalog,
    QString,
    density_from_ensemble,
    entropy_sandwich_report,
    identity_machine,
    machine_from_code,
    multicopy_kraft,
    multicopy_report,
    nonadditivity_search,
    self_delimit_machine,
    sw_lossless_code,
)

# n copies of a two-term state: weights are binomial, lengths grow like
# the self-delimited index of each copy-count, and normalizing by the
# leading weight z recovers log2 of the term count at alpha^2 = 1/2.
rep = multicopy_report(0.5, 3)
print("weights:", tuple(round(w, 6) for w in rep.weights))
print("normalized lengths:", rep.normalized_lengths)
print(f"E[norm] = {rep.expected_normalized} = log2(4) = {math.log2(4)}")
print("kraft over raw lengths:", multicopy_kraft(rep))

# %% Complexity is not additive
#
# In the block [2^m, 2^(m+1)) pick the costliest basis string |n*>.
# Balanced superpositions of |0> and |n*> average m bits cheaper than
# |n*| itself -- the cost concentrates -- and m bits dearer than |0>.
cat = MachineCatalog([self_delimit_machine(identity_machine(9))])
for m_block in (2, 5, 8):
    r = nonadditivity_search(m_block, cat, 1.0)
    print(
        f"m={m_block}: n*={r.n_star} gap_conc={r.gap_concentrated:.3f} "
        f"gap_dil={r.gap_diluted:.3f} "
        f"success=({r.success_concentrated}, {r.success_diluted})"
    )

# %% Entropy sandwich
#
# Against a prefix catalog that contains the lossless code of the
# ensemble's density, the expected universal complexity is squeezed
# between S and S + 1 + index overhead.
ens = Ensemble(
    [(0.5, QString({"00": 1.0})),
     (0.25, QString({"01": 1.0})),
     (0.25, QString({"10": 1.0}))]
)
rho = density_from_ensemble(ens)
sw = machine_from_code(sw_lossless_code(rho))
sand = entropy_sandwich_report(ens, MachineCatalog([sw]))
print(
    f"S={sand.entropy} <= E[QK]={sand.expected_complexity} "
    f"<= S+1+{sand.overhead}: lower={sand.lower_ok} upper={sand.upper_ok}"
)
