# %% [markdown]
# # Membership certificates
#
# Each certificate compares a closed-form left-hand side with a bound.  A
# "Holds" verdict is checked afterwards against the brute-force weighted sum.

# %%
from clausencert import DEFAULT_CONFIG, ClassSpec, OperatorParams, check_direct, check_from_R_beta, check_from_S, cross_validate
from clausencert.cli import ScanRequest, run_scan
from clausencert.certificates import TheoremId

p = OperatorParams(1.0, 1.0, 4.0)
cert = cross_validate(check_direct(ClassSpec.starlike(1.0), p))
print(cert.theorem.value, cert.verdict.value, "lhs", cert.lhs, "rhs", cert.rhs, "oracle", cert.oracle_T.value)

# %% [markdown]
# Preconditions are checked first.  At c = |a| + |b| + 2 the UCV test is not
# admissible and nothing is summed.

# %%
cert = check_direct(ClassSpec.ucv(), p)
print(cert.verdict.value, [(q.required, q.margin) for q in cert.preconditions])

# %% [markdown]
# Certificates from the families R(beta) and S.

# %%
p = OperatorParams(0.3, 0.4, 4.5)
for cert in (
    check_from_R_beta(ClassSpec.convex(0.5), 0.25, p),
    check_from_R_beta(ClassSpec.starlike(1.0), 0.0, p, corollary=True),
    check_from_S(ClassSpec.sp(), OperatorParams(0.3, 0.4, 5.0)),
):
    cert = cross_validate(cert)
    print(f"{cert.theorem.value:5s} {cert.verdict.value:8s} margin {cert.margin:+.6f} weighted sum {cert.oracle_T.value:.6f} budget {cert.budget}")

# %% [markdown]
# The S_p test from R(beta) is the one place where the printed sign of the
# correction term matters.  With the printed "+" sign the left-hand side can
# go very negative and certify points whose weighted sum is well above 1; the
# alternative sign is evaluated alongside and flagged in the notes.

# %%
p = OperatorParams(0.7312248230236637, 2.546834978127726, 3.9022762149374755)
cert = cross_validate(check_from_R_beta(ClassSpec.sp(), 0.21444884310452317, p))
print(cert.verdict.value, "lhs", cert.lhs, "rhs", cert.rhs)
print("alternative sign lhs:", cert.alternatives["lhs_proof_sign"])
for note in cert.notes:
    print(" -", note)

# %% [markdown]
# A small sweep over c: the verdict flips once from Fails to Holds.

# %%
req = ScanRequest(TheoremId.T2_1, fixed={"a": 1.0, "b": 1.0, "lambda": 1.0}, swept=(("c", 3.5, 8.0, 0.5),))
for row in run_scan(req, DEFAULT_CONFIG):
    print(f"c = {row['c']:<4} {row['verdict']:8s} margin {row['margin']:+.4f}")
