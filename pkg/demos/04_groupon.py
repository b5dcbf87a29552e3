"""A second company: Groupon's repeat customers.

The bundled customer counts are an approximate reconstruction, so treat the
ceilings below as illustrative.  Quarterly revenue is close to proportional to
the customer count, which gives a revenue-per-customer slope.
"""
from scurve import (SoftNumbers, build_scenarios, builtin_dataset, builtin_pairs,
                    linear_revenue_fit, steady_state_revenue, to_elapsed, value_company)
from scurve.valuation import plateau_scenarios

customers = to_elapsed(builtin_dataset("groupon-repeat-customers"))
sc = build_scenarios(customers)
ks = (sc.base.params.k, sc.high.params.k, sc.extreme.params.k)
print("customer ceilings (millions):", ", ".join(f"{k / 1e6:.2f}" for k in ks))


slope = linear_revenue_fit(builtin_pairs())
print(f"revenue per customer per year, fitted through the origin: {slope:.1f} USD")

rounded = (17.4e6, 21.1e6, 27.0e6)
for name, k in zip(("base", "high", "extreme"), rounded):
    print(f"  {name:<8} steady-state revenue {steady_state_revenue(k, 78) / 1e9:.2f} billion USD")

value = value_company(plateau_scenarios(rounded), 0.0, SoftNumbers(0.05, 0.20, 78))
print("\nvalue if the plateau is reached now (5% discount, 20% margin, 78 USD):")
for name in ("base", "high", "extreme"):
    print(f"  {name:<8} {value[name] / 1e9:5.2f} billion USD")
