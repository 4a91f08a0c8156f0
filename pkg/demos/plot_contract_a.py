"""
===========================
Pricing a data-use contract
===========================

A provider sells data for a price, charges a fine on breach, and buys
insurance against its own liability. The firm then picks its security level.
This script prints the optimal contract and checks it by brute force.
"""
import math

from cyberins import ScenarioAParams, UtilitySpec, optimal_contract_A, threshold_report
from cyberins.oracle import GridSpec, grid_solve_A

p = ScenarioAParams(V=10, W=50, L=20, psi=1, alpha=0.1, gamma=0.5, utility=UtilitySpec("power", 0.5))
c = optimal_contract_A(p)
print(f"price {c.phi:g}, fine {c.t:g}, insurance {c.L_c:g}, firm invests: {bool(c.investment)}")

###############################################################################
# The fine is just large enough to make investing worth it, and the price
# takes whatever profit the firm has left. With the liability fully covered
# the provider's wealth is W + V - psi - alpha*L in every outcome.

print("certainty equivalent:", c.provider_value**2, "=", p.W + p.V - p.psi - p.alpha * p.L)
print("investment stops paying off above psi =", threshold_report(p).psi_star)

###############################################################################
# The grid solver knows nothing about the closed form.

res = grid_solve_A(p, GridSpec.uniform(201))
print(f"grid optimum {res.value:.12f} vs closed form {c.provider_value:.12f}")
assert math.isclose(res.value, c.provider_value, abs_tol=1e-9)
