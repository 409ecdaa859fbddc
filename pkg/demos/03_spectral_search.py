"""Searching spectral data for a rank-4 bundle with c3 = 6."""
from abelfm import search
from abelfm.report import render

bounds = search.SearchBounds(a=(4, 4), b=(0, 64), chi=(-64, 64))

# The target: rank 4, c1 = 0, c3 = 6, anomaly class effective.
report = search.enumerate_candidates(bounds, search.HeteroticConstraints(rank=4))
print(render(report.as_mapping()))

# The closed form already explains the outcome: c3 vanishes identically untwisted.
cf = search.closed_form()
print("c3 as a polynomial in (a, b, chi):", search.format_poly(cf.c3))

# Relax c3 and drop the anomaly condition: what survives is exactly chi = a.
relaxed = search.HeteroticConstraints(rank=4, c3_target=0, anomaly_mode="ignore")
rep = search.enumerate_candidates(bounds, relaxed)
print("feasible with c3 = 0:", len(rep.feasible), "first few", [c.as_tuple() for c in rep.feasible[:3]])

# Twisting by H^ makes c3 depend on the data, so no blanket certificate applies.
print("c3 after twisting by H^:", search.format_poly(search.closed_form((1, 0)).c3))
