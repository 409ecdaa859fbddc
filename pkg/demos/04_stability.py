"""Ampleness on the dual threefold and the slope-stability threshold."""
from abelfm.ring import builtin_model
from abelfm.stability import PolarizationChoice, effectivity_inequalities, is_ample, slope, stability_threshold

W = builtin_model("Vdual")

for l, k in [(1, 0), (0, 1), (1, 1), (2, 5)]:
    res = is_ample(PolarizationChoice(l, k))
    print(f"l={l} k={k}: ample={res.ample}  degrees on cone generators { {g: str(v) for g, v in res.values.items()} }")

H0 = PolarizationChoice(1, 1)
print("effectivity of H^ against H0:", [str(v) for v in effectivity_inequalities(W.cls("H^"), H0)])
print("slope of 1 + H^:", slope(W.parse("1 + [H^]"), H0))

# With the subsheaf bound a = 160 and mu(E) = 0, rank 4 needs k = 241.
print("threshold:", stability_threshold(160, 0, 4))
