"""Slow, loop-based reference implementations used as test oracles.

Nothing here imports from ``semgact``; every quantity is recomputed from its
textbook definition with plain Python arithmetic where practical.
"""

import cmath
import math


def td_features(x, thr):
    """The 21 time-domain features, one explicit loop each."""
    x = [float(v) for v in x]
    n = len(x)
    amp = max(abs(v) for v in x)
    ssi = sum(v * v for v in x)
    rms = math.sqrt(ssi / n)
    var = ssi / (n - 1)
    wl = sum(abs(x[i + 1] - x[i]) for i in range(n - 1))
    mav = sum(abs(v) for v in x) / n
    zc = 0
    for i in range(n - 1):
        if x[i] * x[i + 1] < 0 and abs(x[i] - x[i + 1]) >= thr:
            zc += 1
    ssc = 0
    for i in range(1, n - 1):
        a, b = x[i] - x[i - 1], x[i] - x[i + 1]
        if a * b > 0 and (abs(a) >= thr or abs(b) >= thr):
            ssc += 1
    wamp = sum(1 for i in range(n - 1) if abs(x[i] - x[i + 1]) > thr)
    iemg = sum(abs(v) for v in x)
    if any(v == 0 for v in x):
        log_det = 0.0
    else:
        log_det = math.exp(sum(math.log(abs(v)) for v in x) / n)
    myop = sum(1 for v in x if abs(v) > thr) / n
    dasdv = math.sqrt(sum((x[i + 1] - x[i]) ** 2 for i in range(n - 1)) / (n - 1))

    def p_of(i):  # i is 1-based
        return 0.75 if 0.2 * n <= i <= 0.8 * n else 0.5

    emav = sum(abs(x[i - 1]) ** p_of(i) for i in range(1, n + 1)) / n
    ewl = sum(abs(x[i - 1] - x[i - 2]) ** p_of(i) for i in range(2, n + 1))
    mmav = mmav2 = 0.0
    for i in range(1, n + 1):
        if 0.25 * n <= i <= 0.75 * n:
            w1 = w2 = 1.0
        elif i < 0.25 * n:
            w1, w2 = 0.5, 4.0 * i / n
        else:
            w1, w2 = 0.5, 4.0 * (n - i) / n
        mmav += w1 * abs(x[i - 1])
        mmav2 += w2 * abs(x[i - 1])
    mmav /= n
    mmav2 /= n
    curve = math.sqrt(sum((x[i + 1] - x[i]) ** 2 for i in range(n - 1)))
    mfl = math.log10(curve) if curve > 0 else 0.0
    aac = wl / n
    mean = sum(x) / n
    m2 = sum((v - mean) ** 2 for v in x) / n
    m3 = sum((v - mean) ** 3 for v in x) / n
    m4 = sum((v - mean) ** 4 for v in x) / n
    kurt = m4 / m2 ** 2 if m2 > 0 else 0.0
    skew = m3 / m2 ** 1.5 if m2 > 0 else 0.0
    return [amp, rms, var, wl, mav, ssi, zc, ssc, wamp, iemg, log_det, myop, dasdv,
            emav, ewl, mmav, mmav2, mfl, aac, kurt, skew]


def covariance(a, b):
    n = len(a)
    ma, mb = sum(a) / n, sum(b) / n
    return sum((a[i] - ma) * (b[i] - mb) for i in range(n)) / (n - 1)


def cumulant2(x):
    n = len(x)
    m = sum(x) / n
    return sum(v * v for v in x) / n - m * m


def cumulant4(w, x, y, z):
    n = len(w)
    c = []
    for s in (w, x, y, z):
        m = sum(s) / n
        c.append([v - m for v in s])
    w, x, y, z = c

    def e(*seqs):
        return sum(math.prod(s[i] for s in seqs) for i in range(n)) / n

    return e(w, x, y, z) - e(w, x) * e(y, z) - e(w, y) * e(x, z) - e(w, z) * e(x, y)


def max_normalized_xcorr(a, b):
    """Scan every lag in (-W, W) explicitly."""
    n = len(a)
    ea = sum(v * v for v in a)
    eb = sum(v * v for v in b)
    best = -math.inf
    for lag in range(-(n - 1), n):
        s = 0.0
        for i in range(n):
            j = i + lag
            if 0 <= j < n:
                s += a[i] * b[j]
        best = max(best, s)
    return best / math.sqrt(ea * eb)


def dft_envelope(x):
    """Analytic-signal magnitude with a direct O(N^2) DFT on the zero-padded signal."""
    n = len(x)
    m = 1
    while m < n:
        m *= 2
    xp = list(x) + [0.0] * (m - n)
    X = [sum(xp[t] * cmath.exp(-2j * math.pi * k * t / m) for t in range(m)) for k in range(m)]
    h = [0.0] * m
    h[0] = 1.0
    if m % 2 == 0:
        h[m // 2] = 1.0
        for k in range(1, m // 2):
            h[k] = 2.0
    else:
        for k in range(1, (m + 1) // 2):
            h[k] = 2.0
    Z = [X[k] * h[k] for k in range(m)]
    z = [sum(Z[k] * cmath.exp(2j * math.pi * k * t / m) for k in range(m)) / m for t in range(n)]
    return [abs(v) for v in z]


def knn_label(points, labels, q, k):
    """Exhaustive k-NN with the nearest-tied-neighbour tie rule."""
    d = []
    for idx, p in enumerate(points):
        d.append((math.sqrt(sum((pi - qi) ** 2 for pi, qi in zip(p, q))), idx, labels[idx]))
    d.sort()
    near = d[:k]
    votes = {}
    for _, _, lb in near:
        votes[lb] = votes.get(lb, 0) + 1
    top = max(votes.values())
    tied = {lb for lb, v in votes.items() if v == top}
    for _, _, lb in near:
        if lb in tied:
            return lb


def log_moments(x):
    """17 log-moment features from a direct DFT magnitude spectrum."""
    n = len(x)
    mags = []
    for k in range(1, n // 2 + 1):
        s = sum(x[t] * cmath.exp(-2j * math.pi * k * t / n) for t in range(n))
        mags.append(abs(s))
    g = [math.sqrt(sum((k + 1) ** i * mags[k] for k in range(len(mags)))) for i in range(7)]

    def ln(v):
        return math.log(max(abs(v), 1e-12))

    f = [ln(g[0]), ln(g[2]), ln(g[4]),
         ln(g[0]) - 0.5 * ln(g[0] - g[2]) - 0.5 * ln(g[0] - g[4]),
         ln(g[2]) - 0.5 * ln(g[0] * g[4]),
         ln(g[0]) - 0.5 * ln(g[1] * g[3]),
         ln(g[0]) - 0.5 * ln(g[2] * g[6])]
    for i in range(1, 6):
        for j in range(i + 1, 6):
            f.append(0.5 * ln(g[i] * g[j]))
    return f


def burg(x, order):
    """Textbook Burg recursion with explicit forward/backward error lists."""
    n = len(x)
    mean = sum(x) / n
    f = [v - mean for v in x]
    b = list(f)
    a = [1.0]
    sigma2 = sum(v * v for v in f) / n
    for m in range(1, order + 1):
        num = sum(f[i] * b[i - 1] for i in range(m, n))
        den = sum(f[i] ** 2 + b[i - 1] ** 2 for i in range(m, n))
        k = -2.0 * num / den
        a_ext = a + [0.0]
        a = [a_ext[i] + k * a_ext[m - i] for i in range(m + 1)]
        f_new, b_new = list(f), list(b)
        for i in range(m, n):
            f_new[i] = f[i] + k * b[i - 1]
            b_new[i] = b[i - 1] + k * f[i]
        f, b = f_new, b_new
        sigma2 *= 1.0 - k * k
    return a[1:], sigma2
