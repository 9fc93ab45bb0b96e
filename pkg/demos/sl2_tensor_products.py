"""Decompose a few tensor products of simple modules for sl2 at l = 3."""

from gencluster.sl2 import KRString, SimpleLabelA1, decompose, simple_character

l = 3
w02 = SimpleLabelA1.make({KRString(0, 2): 1})
w12 = SimpleLabelA1.make({KRString(1, 2): 1})
print(f"chi(W(0,2)) = {simple_character(w02, l)}")
for lab, mult in sorted(decompose([w02, w12], l).items(), key=lambda kv: str(kv[0])):
    print(f"  {mult} x [{lab}]")
