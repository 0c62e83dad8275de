"""Independent brute-force oracles shared by the test modules.

Everything here recomputes walk quantities from the literal site strings,
character by character, so agreement with the library is a genuine
cross-check rather than the same arithmetic twice.
"""

from fractions import Fraction


def site_string(n: int, j: int) -> str:
    return "0" + bin(j)[2:].zfill(n)


def changes_oracle(n: int, j: int) -> int:
    s = site_string(n, j)
    return sum(a != b for a, b in zip(s, s[1:]))


def ones_oracle(n: int, j: int) -> int:
    return site_string(n, j).count("1")


def entry_sign_oracle(n: int, j: int, k: int) -> int:
    sj, sk = site_string(n, j), site_string(n, k)
    if sj[-1] != sk[-1]:
        return 0
    return 1 if (changes_oracle(n, j) - changes_oracle(n, k)) % 4 == 0 else -1


def mu_oracle(n: int, members) -> Fraction:
    members = list(members)
    total = sum(entry_sign_oracle(n, j, k) for j in members for k in members)
    return Fraction(total, 1 << n)
