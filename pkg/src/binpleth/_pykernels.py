"""Pure-Python versions of the inner loops.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
The two must agree exactly; ``tests/test_kernels.py`` runs both.
"""


def forward_differences(values):
    """Newton coefficients ``[D^0 v(0), D^1 v(0), ...]`` of a value list."""
    row = list(values)
    out = []
    while row:
        out.append(row[0])
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
    return out


def forward_differences_2d(grid):
    # differences along rows, then along columns
    rows = [forward_differences(r) for r in grid]
    if not rows:
        return []
    ncols = len(rows[0])
    cols = [forward_differences([r[j] for r in rows]) for j in range(ncols)]
    return [[cols[j][i] for j in range(ncols)] for i in range(len(rows))]


def binom_mod_p(a, n, p):
    """C(a, n) mod p for integers a >= 0, n >= 0 by Lucas' theorem."""
    if n < 0 or a < 0:
        raise ValueError("binom_mod_p needs nonnegative arguments")
    result = 1
    while n:
        ad, nd = a % p, n % p
        if nd > ad:
            return 0
        num = 1
        den = 1
        for i in range(nd):
            num = num * (ad - i) % p
            den = den * (i + 1) % p
        result = result * num * pow(den, p - 2, p) % p
        a //= p
        n //= p
    return result % p


def binom_row_mod_p(a, nmax, p):
    return [binom_mod_p(a, n, p) for n in range(nmax + 1)]


def bilinear_mod(terms, u, v, p):
    """Sum of ``c * u[i] * v[j]`` over ``(i, j, c)`` in ``terms``, reduced mod p."""
    total = 0
    for i, j, c in terms:
        total += c * u[i] * v[j]
    return total % p


def poly_mulmod(a, b, g, n):
    """Product of coefficient tuples ``a*b`` reduced by monic ``g`` and mod ``n``.

    ``g`` is given low-to-high and includes its leading 1; ``a`` and ``b`` have
    length ``len(g) - 1``.
    """
    d = len(g) - 1
    prod = [0] * (2 * d - 1 if d else 0)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k] % n
        if c:
            for t in range(d):
                prod[k - d + t] -= c * g[t]
        prod[k] = 0
    return tuple(x % n for x in prod[:d])
