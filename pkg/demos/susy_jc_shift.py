"""Generalized JC: which alpha + beta makes {QQp,QQm} equal the shifted Hamiltonian.

Run: python3 demos/susy_jc_shift.py
"""

from superprolong.algebra import supercharge_suite
from superprolong.models import builtin

for shift in ("printed", "derived"):
    for phi in ("0", "pi/4"):
        rep = supercharge_suite(builtin("jc_generalized", phi=phi), shift=shift)
        bad = [r["name"] for r in rep["relations"] if not r["ok"]]
        print(f"shift={shift:8s} phi={phi:5s} ok={rep['summary']['ok']}  failing: {bad or '-'}")

m = builtin("jc_generalized")
print("printed:", m.doc["substitutions"]["printed_shift"]["beta"])
print("derived:", m.doc["substitutions"]["derived_shift"]["beta"])
