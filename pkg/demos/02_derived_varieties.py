# ## Hypersubstitutions and derived varieties of bands

from hypervar import band_sigma, derive_identity, parse_identity, BANDS
from hypervar.registry import REGISTRY, B, derived_variety, dimension, classify, show_identity, variety_lattice

# ### Six hypersubstitutions cover all bands

for name in ("s1", "s2", "s3", "s4", "s5", "s6"):
    print(name, band_sigma(name).literal())

# Applying s5 to the axiom of V1

e = parse_identity("zxy = zyx", BANDS)
show_identity(derive_identity(band_sigma("s5"), e))

# ### Where each variety goes

for name in ("RB", "NB", "V5", "RegB"):
    v = REGISTRY[name]
    targets = {s: derived_variety(v, band_sigma(s)).name for s in ("s1", "s2", "s3", "s4", "s5", "s6")}
    print(name, targets)

# ### Dimension

rep = dimension(REGISTRY["NB"])
print("\n".join(rep.rows()))
rep.dimension

# ### Flags

for name in ("T", "LZ", "RB", "V1", "V5", "NB", "RegB"):
    c = classify(REGISTRY[name])
    print(f"{name:5s} dim={c.dimension}  " + ", ".join(c.flags()))

# All bands are not solid: a derived associativity law already fails.

c = classify(B)
c.solid, c.witness

# ### The registry as a lattice

h = variety_lattice()
h.atoms(), h.lower_covers("RegB"), h.join("V3", "V4")
