"""Is facebook's user growth still exponential?

Refit a pure exponential after dropping the latest observations one at a
time.  If growth has started to bend, the newest points are the ones that
disagree, so the error falls sharply once they are gone and then levels off.
"""
from scurve import builtin_dataset, regime_scan, to_elapsed

users = to_elapsed(builtin_dataset("facebook-users"))
scan = regime_scan(users, max_omit=10)

print(f"{len(users)} observations of {users.label}\n")
print("omitted  error")
for k, err in enumerate(scan.error_values):
    print(f"{k:>7}  {err:.4f}")
print(f"\nplateau of later errors : {scan.plateau_level:.4f}")
print(f"full-sample / plateau   : {scan.jump_ratio:.2f}")
print("regime change detected  :", scan.regime_change_detected)
