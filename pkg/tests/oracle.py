"""Independent brute-force oracles: plain tuple enumeration, no shared code
with the library paths they validate."""

import itertools


def quadruple_energy(a, b, n):
    """|{(a1, b1, a2, b2) : a1 + b1 = a2 + b2 mod n}|"""
    count = 0
    for a1 in a:
        for b1 in b:
            for a2 in a:
                for b2 in b:
                    if (a1 + b1 - a2 - b2) % n == 0:
                        count += 1
    return count


def shift_tuple_energy(a, n, k):
    """E_k via sum over (k-1)-tuples of shifts of |A_s|^2."""
    total = 0
    mem = set(a)
    for s in itertools.product(range(n), repeat=k - 1):
        cur = [x for x in a if all((x + si) % n in mem for si in s)]
        total += len(cur) ** 2
    return total


def t_k_count(a, n, k):
    """|{(x_1..x_k, y_1..y_k) in A^2k : sum x = sum y mod n}|"""
    sums = {}
    for xs in itertools.product(a, repeat=k):
        s = sum(xs) % n
        sums[s] = sums.get(s, 0) + 1
    return sum(v * v for v in sums.values())


def sigma_k_count(a, n, k):
    return sum(1 for xs in itertools.product(a, repeat=k) if sum(xs) % n == 0)


def correlate_fn(f, g, n):
    return [sum(f[y] * g[(y + x) % n] for y in range(n)) for x in range(n)]


def convolve_fn(f, g, n):
    return [sum(f[y] * g[(x - y) % n] for y in range(n)) for x in range(n)]


def triangle_enumeration(a, psi, n):
    total = 0
    for x in a:
        for y in a:
            for z in a:
                total += psi[(x - y) % n] * psi[(x - z) % n] * psi[(y - z) % n]
    return total


def cycle_enumeration(a, psi, n, k):
    total = 0
    for xs in itertools.product(a, repeat=k):
        term = 1
        for i in range(k):
            term *= psi[(xs[i] - xs[(i + 1) % k]) % n]
        total += term
    return total


def mult_tuple_energy(a, p, k):
    """|{x_1...x_k = y_1...y_k mod p}| for a set of units."""
    prods = {}
    for xs in itertools.product(a, repeat=k):
        v = 1
        for x in xs:
            v = (v * x) % p
        prods[v] = prods.get(v, 0) + 1
    return sum(v * v for v in prods.values())


def longest_ap_naive(members, p):
    """Longest arithmetic progression inside a set of residues, O(p^2-ish)."""
    mem = set(members)
    best = 1 if members else 0
    for x in members:
        for d in range(1, p):
            if (x - d) % p in mem:
                continue
            length = 1
            cur = x
            while (cur + d) % p in mem and length < p:
                cur = (cur + d) % p
                length += 1
            best = max(best, length)
    return best
