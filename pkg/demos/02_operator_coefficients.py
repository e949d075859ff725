# %% [markdown]
# # The operator and its coefficients
#
# The operator multiplies the n-th Taylor coefficient of f by B_n, a ratio of
# Pochhammer products.  Here we look at B_n, push a function through the
# operator and compute the brute-force weighted sums used as an oracle.

# %%
import math

import numpy as np

from clausencert import (
    ClassSpec,
    OperatorParams,
    SourceSpec,
    apply_operator,
    hyper_coefficients,
    worst_case_T,
)

p = OperatorParams(0.5, 0.5, 3.0)
B = hyper_coefficients(p, 12)
print(np.array2string(B, precision=6))

# %% [markdown]
# With b = c the Clausen parameters cancel and B_n (n-1)! is just (a)_{n-1}.

# %%
q = OperatorParams(1.7, 2.2, 2.2)
Bq = hyper_coefficients(q, 8)
print([round(float(Bq[n - 1]) * math.factorial(n - 1), 10) for n in range(1, 9)])
print([round(math.prod(1.7 + k for k in range(n - 1)), 10) for n in range(1, 9)])

# %% [markdown]
# The Koebe function z/(1-z)^2 has a_n = n, the extreme case for the class S.

# %%
koebe = np.arange(1, 13, dtype=float)
image = apply_operator(p, koebe)
print(image.coefficients[:6])

# %% [markdown]
# Weighted sums decide membership: for S*_lambda the weight is (n + lambda - 1),
# for C_lambda it is n(n + lambda - 1).  Each source family contributes its own
# worst-case coefficient bound.

# %%
p = OperatorParams(0.4, 0.7, 6.9)
for cls in (ClassSpec.starlike(0.6), ClassSpec.convex(0.6), ClassSpec.ucv(), ClassSpec.sp()):
    for src in (SourceSpec.self_function(), SourceSpec.r_beta(0.3), SourceSpec.full_s()):
        t = worst_case_T(cls, src, p)
        print(f"{cls.kind.value:15s} {src.kind.value:12s} T = {t.value:.10f}  (+/- {t.tail_bound:.1e})")
