"""
Describer machines and universal description length
====================================================

A describer machine maps bitstring programs to orthonormal output
states; the cost of a state is the average program length, forced by
the machine's linearity.  A catalog of machines gives a universal
value: pay for the machine's index, then for its shortest description.
"""

from qfock import (
    DescriberMachine,
    MachineCatalog,
    QString,
    average_length,
    basis_state,
    fidelity_penalized_complexity,
    identity_machine,
    incompressibility_report,
    index_cost,
    machine_complexity,
    self_delimit_machine,
    universal_complexity,
)

# The identity machine outputs every bitstring up to a length cutoff.
ident = identity_machine(6)
psi = QString({"0": 0.6, "11": 0.8})
est = machine_complexity(ident, psi)
print("identity cost of psi:", est.value, "=", average_length(psi))
print("decomposition:", est.decomposition)

# A machine can also output superpositions; describing a basis string
# then costs a mix of the programs that overlap it.
plus = QString({"0": 2**-0.5, "1": 2**-0.5})
minus = QString({"0": 2**-0.5, "1": -(2**-0.5)})
mach = DescriberMachine({"0": plus, "10": minus}, prefix_flag=True)
print("cost of |0> via +/- machine:", machine_complexity(mach, basis_state("0")).value)

# %% Catalogs
#
# Charging 2*len(bin(i))+1 bits for machine index i makes the catalog
# value a universal yardstick: it only improves as machines are added.
cat = MachineCatalog([ident, self_delimit_machine(ident)])
u = universal_complexity(cat, psi)
print(f"universal value {u.value} via machine #{u.machine_index}"
      f" (index costs {index_cost(1)}, {index_cost(2)})")

# %% Trading fidelity for length
#
# If approximate output is acceptable, charge ceil(-log2 fidelity) on
# top of the program length and take the cheapest tradeoff.
table = {"1": plus, "000000": basis_state("0")}
print("penalized cost of |0>:", fidelity_penalized_complexity(table, basis_state("0")))

# %% Most states are incompressible
#
# In any orthonormal k-member family, some member costs at least
# log2(k) against a prefix catalog.
fam = [basis_state(format(i, "03b")) for i in range(8)]
rep = incompressibility_report(fam, MachineCatalog([self_delimit_machine(ident)]))
print(
    f"k={rep.member_count} entropy={rep.entropy} "
    f"max description={rep.max_description_length} verified={rep.verified}"
)
