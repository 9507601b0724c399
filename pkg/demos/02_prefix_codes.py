"""
Prefix codes, Kraft sums, and the Shannon bound
===============================================

Classical scaffolding: prefix-free codeword tables, exact Kraft
arithmetic over dyadic rationals, and Shannon's ceil(-log2 p) code
whose expected length sits within one bit of the entropy.
"""

from qfock import (
    canonical_prefix_code,
    code_table_text,
    expected_length,
    kraft_sum_exact,
    shannon_code,
    shannon_entropy,
)

# Kraft sums are computed exactly, as fractions, so a complete code
# really sums to 1 and not to 0.9999999999999998.
print("kraft {1,2,2}:", kraft_sum_exact([1, 2, 2]))
print("kraft {2,2,3}:", kraft_sum_exact([2, 2, 3]))

# Any feasible length profile has a canonical table: sort by length,
# hand out the lexicographically smallest available words.
code = canonical_prefix_code([2, 1, 2])
print(code_table_text(code))

# %% Shannon code for a skewed source
p = [0.9, 0.05, 0.03, 0.02]
sh = shannon_code(p)
print(code_table_text(sh))

h = shannon_entropy(p)
el = expected_length(sh, p)
print(f"H(p) = {h:.6f}")
print(f"E[len] = {el:.6f}")
assert h <= el < h + 1.0, "Shannon code must sit inside [H, H+1)"
print("H <= E[len] < H + 1 holds")
