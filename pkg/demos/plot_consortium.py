"""
======================
Joining a consortium
======================

Pooling data raises its value with v(k) but also raises the chance that
some member is breached. A single provider compares the two and joins only
while the value gain beats the extra expected liability.
"""
from cyberins import fig2_default_params, participation_threshold, sweep_k

p = fig2_default_params()
s = sweep_k(p, range(2, 17))
for k, h1, hk in zip(s.values, s.columns["H1"], s.columns["Hk"]):
    print(f"k={int(k):2d}  alone {h1:.4f}  pooled {hk:.4f}  {'join' if hk >= h1 else 'stay out'}")

rep = participation_threshold(p, 64)
print("largest consortium worth joining:", rep.k_star)
