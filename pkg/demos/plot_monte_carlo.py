"""
=====================
Sampling breaches
=====================

Draw breach events for an uninsured contract and compare the sample-mean
utility with its expectation. The optimal contract is riskless, so its
standard error is exactly zero.
"""
from cyberins import ContractA, fig1_default_params, optimal_contract_A, provider_utility_A
from cyberins.simulate import simulate_A

p = fig1_default_params()
bare = ContractA(10.0, 0.0, 0.0, 0, provider_utility_A(p, 10.0, 0.0, 0.0, 0))

for n in (1_000, 100_000, 1_000_000):
    r = simulate_A(p, bare, n, seed=7)
    print(f"n={n:>9,}  mean {r.mean_utility:.5f}  expected {r.analytical:.5f}  z {r.z:+.2f}")

r = simulate_A(p, optimal_contract_A(p), 10_000, seed=7)
print("optimal contract: std error", r.std_error, "z", r.z)
