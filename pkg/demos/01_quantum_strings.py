"""
Superposed bitstrings and length observables
============================================

A state is a normalized superposition of finite bitstrings.  Length is
an observable, so a superposition has an *average* length (the mean of
the length operator) and a *base* length (the longest branch).
"""

from qfock import (
    QString,
    average_length,
    base_length,
    basis_state,
    pair_decode,
    pair_encode,
    self_delimit,
    sequence_decode,
    sequence_encode,
)

# A 60/40 superposition of a short and a long string.
psi = QString({"0": 0.6, "11": 0.8})
print("state:", psi)
print("average length:", average_length(psi))   # 0.36*1 + 0.64*2 = 1.64
print("base length:   ", base_length(psi))      # worst branch: 2

# The empty string is a legitimate branch; it contributes length zero.
vac = basis_state("")
print("vacuum average length:", average_length(vac))

# %% Self-delimiting transform
#
# Mapping each branch x -> 1^len(x) 0 x makes every branch announce its
# own end.  The transform is an isometry and exactly doubles-plus-one
# the average length.
sd = self_delimit(psi)
print("self-delimited:", sd)
print("2*1.64 + 1 =", average_length(sd))

# %% Pairing and sequences
#
# The same trick concatenates two strings reversibly: the first string
# is sent self-delimited, the second raw.
z = pair_encode("110", "1000")
print("pair(110, 1000) =", z)
print("decoded back:   ", pair_decode(z))

# Folding the pair right-to-left extends this to whole sequences.  The
# decoder needs to know how many items to peel off.
chain = sequence_encode(["1", "00", "101"])
print("sequence:", chain, "->", sequence_decode(chain, 3))
