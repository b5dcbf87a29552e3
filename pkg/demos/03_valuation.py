"""Putting a price on the user base.

Each future user-year is discounted back to today.  Dividing out the profit
per user gives a table that depends only on the curve and the discount rate;
plugging in a margin and revenue per user turns it into dollars.
"""
from scurve import (SoftNumbers, TrendPair, avg_revenue_per_user, build_scenarios,
                    builtin_dataset, fit_trend, to_elapsed, valuation_table,
                    value_company)

users = to_elapsed(builtin_dataset("facebook-users"))
revenue = to_elapsed(builtin_dataset("facebook-revenues"))
sc = build_scenarios(users)
now = users.t[-1]

table = valuation_table(sc, now, [0.02, 0.05, 0.10])
print("discounted user-years (billions)")
print(table.to_markdown())

trends = TrendPair(fit_trend(revenue), fit_trend(users))
print(f"\nrevenue grows at {trends.revenue_trend.r:.3f}/yr, users at {trends.user_trend.r:.3f}/yr")
print(f"so revenue per user halves every {trends.half_life:.2f} years")
print(f"five-year average revenue per user: {avg_revenue_per_user(trends, 7.5):.2f} USD")

soft = SoftNumbers(discount_rate=0.05, profit_margin=0.29, revenue_per_user=3.5)
result = value_company(sc, now, soft)
print(f"\nat 5% discount, 29% margin and 3.50 USD per user "
      f"(profit {soft.profit_per_user:.2f} USD):")
for name in ("base", "high", "extreme"):
    print(f"  {name:<8} {result[name] / 1e9:6.1f} billion USD")
