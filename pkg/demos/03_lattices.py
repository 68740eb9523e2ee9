# ## Lattice mode

from hypervar import derived_algebra, isomorphic, parse_hypersubstitution
from hypervar.lattices import (
    DISTRIBUTIVE,
    LATTICE_AXIOMS,
    MODULAR,
    axiom_report,
    chain,
    dual,
    enumerate_binary_lattice_terms,
    fluidity_certificate,
    model,
)
from hypervar.terms import LATTICES, print_term

# ### Binary terms collapse to four classes

for depth in (1, 2, 3):
    classes = enumerate_binary_lattice_terms(depth)
    print(depth, [print_term(c[0], LATTICES) for c in classes], [len(c) for c in classes])

# ### Derived two-element chains

c2 = chain(2)
swapped = derived_algebra(c2, parse_hypersubstitution("swap"))
[r.passed for r in axiom_report(swapped)], isomorphic(swapped, dual(c2))

proj = derived_algebra(c2, parse_hypersubstitution("join:=x"))
for r in axiom_report(proj):
    print(r.name, r.verdict.describe())

# ### Fluidity certificates

for name, axioms in [("chain2", LATTICE_AXIOMS + (DISTRIBUTIVE,)), ("N5", LATTICE_AXIOMS), ("M3", LATTICE_AXIOMS + (MODULAR,))]:
    rep = fluidity_certificate([model(name)], axioms)
    print(name, "dimension", rep.dimension, "fluid", rep.fluid)
    for v in rep.verdicts:
        print("   ", v.row())
