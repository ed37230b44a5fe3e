# Coefficient-list kernels over Z/mZ.  Lists are low degree first.

from __future__ import annotations


def _pack(a, width):
    return int.from_bytes(b"".join(c.to_bytes(width, "little") for c in a), "little")


def mul_trunc(a, b, n, mod):
    """Product of ``a`` and ``b`` modulo (mod, X^n), via Kronecker substitution."""
    a = a[:n]
    b = b[:n]
    if not a or not b or n <= 0:
        return [0] * max(n, 0)
    if len(a) * len(b) <= 64:
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b[: n - i]):
                    out[i + j] += x * y
        return [c % mod for c in out]
    bits = 2 * (mod - 1).bit_length() + min(len(a), len(b)).bit_length() + 1
    width = (bits + 7) // 8
    prod = _pack(a, width) * _pack(b, width)
    raw = prod.to_bytes((len(a) + len(b)) * width, "little")
    out = [int.from_bytes(raw[i * width:(i + 1) * width], "little") % mod
           for i in range(min(n, len(a) + len(b) - 1))]
    out.extend([0] * (n - len(out)))
    return out


def inv_trunc(a, n, mod):
    """Inverse of a power series with unit constant term, modulo (mod, X^n)."""
    inv = [pow(a[0], -1, mod)]
    k = 1
    while k < n:
        k = min(2 * k, n)
        # Newton step: inv <- inv * (2 - a * inv)
        e = mul_trunc(a, inv, k, mod)
        e = [(-c) % mod for c in e]
        e[0] = (e[0] + 2) % mod
        inv = mul_trunc(inv, e, k, mod)
    return inv + [0] * (n - len(inv))


def add(a, b, mod):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return [(x + y) % mod for x, y in zip(a, b)]


def sub(a, b, mod):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return [(x - y) % mod for x, y in zip(a, b)]


def polymul(a, b, mod):
    """Full product of two polynomials modulo ``mod``."""
    if not a or not b:
        return []
    return mul_trunc(a, b, len(a) + len(b) - 1, mod)


def divmod_monic(a, b, mod):
    """Quotient and remainder of ``a`` by the monic polynomial ``b`` (b[-1] == 1)."""
    d = len(b) - 1
    r = [c % mod for c in a]
    if len(r) <= d:
        return [], r + [0] * (d - len(r))
    q = [0] * (len(r) - d)
    for k in range(len(r) - 1, d - 1, -1):
        c = r[k]
        if c:
            q[k - d] = c
            for j in range(d):
                r[k - d + j] = (r[k - d + j] - c * b[j]) % mod
            r[k] = 0
    return q, r[:d]


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a
