# %% [markdown]
# # Special-function kernel
#
# Everything downstream rests on three numbers: log-Gamma, the Gauss function
# at z = -1 and the Clausen sum at z = 1.  This walk-through evaluates each one
# against a value known in closed form.

# %%
import math

from clausencert import clausen_3f2_at_one, driver_johnston_rhs, gauss_2f1_at_minus_one, log_gamma

# %% [markdown]
# log-Gamma keeps full relative accuracy right next to its zeros at 1 and 2,
# where `math.lgamma` loses digits.

# %%
for x in (1 + 1e-9, 2.5, 4.0, 1e5):
    print(f"x = {x:<14.10g} log_gamma = {log_gamma(x):.17g}   math.lgamma = {math.lgamma(x):.17g}")

# %% [markdown]
# 2F1(1, 1; 2; -1) is ln 2 and 2F1(1, 1/2; 3/2; -1) is pi/4.  The alternating
# series behind both converges only like 1/n; the default method sums the
# Euler-transformed series at 1/2 instead, which converges geometrically.

# %%
for (a, b, c), want in (((1, 1, 2), math.log(2)), ((1, 0.5, 1.5), math.pi / 4)):
    v = gauss_2f1_at_minus_one(a, b, c)
    print(f"2F1({a}, {b}; {c}; -1) = {v.value:.17g}  err {abs(v.value - want):.1e}  terms {v.terms_used}")

slow = gauss_2f1_at_minus_one(1, 1, 2.5, method="direct")
print("direct alternating sum, bracket:", slow.bracket, "terms", slow.terms_used)

# %% [markdown]
# The Clausen sum at 1 has terms that decay only polynomially.  A head of a
# few hundred terms is summed exactly and the remainder comes from an
# asymptotic expansion of the term, so the result matches the Gamma-function
# closed form to near machine precision.

# %%
for a, b, c in ((1, 1, 4), (0.5, 0.5, 1.25), (2.0, 3.0, 5.3)):
    brute = clausen_3f2_at_one(a, b, c)
    closed = driver_johnston_rhs(a, b, c)
    print(f"({a}, {b}, {c}): series {brute.value:.15g}  closed {closed:.15g}  rel diff {abs(brute.value - closed) / closed:.1e}")

print("6 ln 2 - 3 =", 6 * math.log(2) - 3)
