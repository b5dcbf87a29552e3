"""From growth rates to three logistic scenarios.

Year-over-year growth rates fall roughly linearly with the user count, which
is what a logistic curve predicts.  The regression's root gives a central
ceiling; its one-sided confidence bounds give optimistic alternatives.
"""
from scurve import (build_scenarios, builtin_dataset, fit_exponential, forecast,
                    nested_model_test, to_elapsed)

users = to_elapsed(builtin_dataset("facebook-users"))
sc = build_scenarios(users)
reg = sc.regression

print(f"rate regression: r = {reg.a:.3f} + ({reg.b:.3e}) * users")
print(f"ceiling from the regression root: {reg.k_point / 1e9:.3f} billion")
print(f"80% bound {sc.k_high / 1e9:.3f} billion, 95% bound {sc.k_extreme / 1e9:.3f} billion\n")

print("scenario      K (bn)      r        P0      error")
for name, fit in sc:
    p = fit.params
    print(f"{name:<9} {p.k / 1e9:9.3f} {p.r:8.3f} {p.p0:9.0f} {fit.error:10.4f}")

p = nested_model_test(fit_exponential(users), sc.base, len(users))
print(f"\nexponential vs logistic, nested F-test p-value: {p:.2e}")

print("\nusers (millions) five and ten years past the last observation:")
for name, fit in sc:
    traj = forecast(fit, users.t[-1], 10)
    print(f"  {name:<8} {traj.values[4] / 1e6:8.0f} {traj.values[9] / 1e6:8.0f}")
