"""Independent oracle for the sub-episode MDP value.

Recursion over (sub-episode index, prior s2 entries) with exact rationals;
shares no code with the C++ dynamic program it checks.
"""
from fractions import Fraction
from functools import lru_cache
import sys


def value(p_a1, sub_episodes=50, drift=Fraction(1, 100), pre_increment=True):
    p = Fraction(p_a1)

    @lru_cache(maxsize=None)
    def v(m, entries):
        if m == sub_episodes:
            return Fraction(0)
        eps = drift * (entries if pre_increment else entries + 1)
        via_s2 = 1 + (-2 + eps) + v(m + 1, entries + 1)
        via_s3 = -1 + 2 + v(m + 1, entries)
        return p * via_s2 + (1 - p) * via_s3

    sys.setrecursionlimit(10000)
    return v(0, 0)


if __name__ == "__main__":
    for p in (Fraction(1, 2), Fraction(9, 10), Fraction(1), Fraction(0)):
        for pre in (True, False):
            print(f"p={p} pre={pre} V={float(value(p, pre_increment=pre))!r}")
    print("reduced 5 sub-episodes, p=9/10:", float(value(Fraction(9, 10), 5)))
    print("reduced 5 sub-episodes, p=1/2:", float(value(Fraction(1, 2), 5)))
