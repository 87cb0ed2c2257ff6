"""Two charts on the 2-sphere over F_5 and the transition between them.

Run with ``python3 demos/03_change_of_base.py``.
"""

from charp_diffops import Chart, compute_schedule, fixture, verify_R, verify_R5
from charp_diffops.dop import merge_schedules

V = fixture("SPHERE3")
base, target = ((1,), (1,)), ((1,), (2,))
charts = [Chart(V.jd, *b, 8) for b in (base, target)]
for b, ch in zip((base, target), charts):
    print("chart %s: Delta = %s, free variables %s" % (b, ch.delta_poly, ch.comp))

sched = merge_schedules([compute_schedule(ch, 2) for ch in charts])
print("shared schedule:", sched.to_json())

rep = verify_R(charts[0], sched, 2)
print("\nrelations among the generators on the first chart:", rep.families())

rep5 = verify_R5(V.jd, base, target, 3, sched, 2)
print("change of base to the second chart:", "holds" if rep5.passed else "fails")
for key, note in sorted(rep5.notes.items()):
    print("  %s: clearing power m = %s, Delta^m alone clears: %s"
          % (key, note["m"], note["plain_form_clears"]))
