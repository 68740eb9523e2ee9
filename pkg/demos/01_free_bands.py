# ## Free bands and their quotients

import numpy as np

from hypervar import free_band, holds, parse_identity, BANDS
from hypervar.bands import band_canonical, fast_normalize, format_key, word, word_str
from hypervar.registry import REGISTRY

# ### The free band on two and three generators

fb2 = free_band(2)
print(fb2.size, [word_str(w) for w in fb2.labels])

fb3 = free_band(3)
print(fb3.size)

# The multiplication table is a plain numpy array.

table = fb3["mul"]
table.shape, table.dtype

# Every element is idempotent: the diagonal is the identity map.

np.array_equal(np.diag(table), np.arange(fb3.size))

# ### Word problem

word_str(band_canonical(word("xyzxzy")))

for u, v in [("xyxy", "xy"), ("xyx", "xy"), ("zxyxz", "zyxyz")]:
    print(u, v, holds((), parse_identity(f"{u} = {v}", BANDS)).holds)

# ### Relatively free bands of the registry

for name, v in REGISTRY.items():
    print(f"{name:5s} F(2)={v.free_algebra(2).size:3d}  F(3)={v.free_algebra(3).size:3d}")

# Closed-form keys for the varieties that have one

for name in ("NB", "V3", "RegB"):
    print(format_key(name, fast_normalize(name, word("zxyxz"))))
