# cython: language_level=3
"""Compiled versions of the inner loops in ``_pykernels``.

Difference tables stay on Python objects (the entries are big integers or
Fractions); the modular kernels run on C ``long long`` and require moduli
below 2**31 so products cannot overflow.
"""


def forward_differences(values):
    cdef list row = list(values)
    cdef list out = []
    cdef Py_ssize_t i, n
    n = len(row)
    while n:
        out.append(row[0])
        for i in range(n - 1):
            row[i] = row[i + 1] - row[i]
        n -= 1
    return out


def forward_differences_2d(grid):
    cdef list rows = [forward_differences(r) for r in grid]
    cdef Py_ssize_t i, j, nrows, ncols
    if not rows:
        return []
    nrows = len(rows)
    ncols = len(rows[0])
    cdef list cols = [forward_differences([rows[i][j] for i in range(nrows)]) for j in range(ncols)]
    return [[cols[j][i] for j in range(ncols)] for i in range(nrows)]


cdef long long _inv_mod(long long a, long long p):
    cdef long long result = 1, e = p - 2
    a %= p
    while e:
        if e & 1:
            result = result * a % p
        a = a * a % p
        e >>= 1
    return result


cdef long long _binom_small(long long a, long long n, long long p):
    cdef long long num = 1, den = 1, i
    if n > a:
        return 0
    for i in range(n):
        num = num * (a - i) % p
        den = den * (i + 1) % p
    return num * _inv_mod(den, p) % p


def binom_mod_p(a, n, long long p):
    if n < 0 or a < 0:
        raise ValueError("binom_mod_p needs nonnegative arguments")
    if p >= 2 ** 31:
        raise OverflowError("modulus too large for the compiled kernel")
    cdef long long result = 1, ad, nd
    while n:
        ad = a % p
        nd = n % p
        if nd > ad:
            return 0
        result = result * _binom_small(ad, nd, p) % p
        a //= p
        n //= p
    return result


def binom_row_mod_p(a, long long nmax, long long p):
    cdef long long n
    return [binom_mod_p(a, n, p) for n in range(nmax + 1)]


def bilinear_mod(terms, u, v, long long p):
    cdef long long total = 0, c
    cdef Py_ssize_t i, j
    cdef list uu = [x % p for x in u]
    cdef list vv = [x % p for x in v]
    for i, j, coeff in terms:
        c = coeff % p
        total = (total + c * (<long long>uu[i]) % p * (<long long>vv[j])) % p
    return total


def poly_mulmod(a, b, g, long long n):
    cdef Py_ssize_t d = len(g) - 1
    cdef Py_ssize_t i, j, k, t
    cdef long long c, ai
    if n >= 2 ** 31:
        raise OverflowError("modulus too large for the compiled kernel")
    cdef list prod = [0] * (2 * d - 1 if d else 0)
    cdef list bb = [x % n for x in b]
    cdef list gg = [x % n for x in g]
    for i in range(len(a)):
        ai = a[i] % n
        if ai:
            for j in range(len(bb)):
                prod[i + j] = (<long long>prod[i + j] + ai * (<long long>bb[j])) % n
    for k in range(len(prod) - 1, d - 1, -1):
        c = (<long long>prod[k]) % n
        if c:
            for t in range(d):
                prod[k - d + t] = ((<long long>prod[k - d + t]) - c * (<long long>gg[t])) % n
        prod[k] = 0
    return tuple([(<long long>x) % n for x in prod[:d]])
