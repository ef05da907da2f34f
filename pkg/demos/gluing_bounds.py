"""Lower bounds on real embedding counts by gluing.

Joining copies of a maximally real graph G along a shared rigid triangle
multiplies the real counts, giving families whose counts grow like
(rG/rH)^(n/(nG-nH)).  The presets reproduce the published growth bases.
"""

from rigidembed.bounds import PRESETS, asymptotic_base, glued_lower_bound, preset

for name in PRESETS:
    spec = preset(name)
    base = asymptotic_base(spec)
    print(f"{name}: glue copies of (n={spec.nG}, r={spec.rG}) on a "
          f"triangle (r={spec.rH}), geometry {spec.geometry}")
    print(f"  growth base (rG/rH)^(1/(nG-nH)) = {base:.5f}")
    for k in range(4):
        n = spec.nH + k * (spec.nG - spec.nH)
        res = glued_lower_bound(preset(name, n))
        print(f"  n = {n:3d}: at least {res.value} real embeddings")
    print()
