"""Dirichlet eigenvalues of V = M on [x, pi], 0 on [0, x), from the C^1 matching
of sin(k t) on the left with sin(r (pi - t)) / sinh(s (pi - t)) on the right,
solved at 40 digits by scanning the sign of the matching determinant."""
import mpmath as mp

mp.mp.dps = 40


def det(lam, M, x):
    k = mp.sqrt(lam)
    L = mp.pi - x
    if lam > M:
        r = mp.sqrt(lam - M)
        # u = sin(k x), u' = k cos(k x); right: sin(r L), -r cos(r L)
        return mp.sin(k * x) * (-r * mp.cos(r * L)) - k * mp.cos(k * x) * mp.sin(r * L)
    if lam < M:
        s = mp.sqrt(M - lam)
        return mp.sin(k * x) * (-s * mp.cosh(s * L)) - k * mp.cos(k * x) * mp.sinh(s * L)
    return -mp.sin(k * x) - k * mp.cos(k * x) * L


def eigenvalues(M, x, count=2):
    M = mp.mpf(M)
    x = mp.mpf(x)
    out = []
    top = M + (count + 2) ** 2 + 10
    n = 20000
    prev_l = mp.mpf("1e-6")
    prev = det(prev_l, M, x)
    for i in range(1, n + 1):
        lam = prev_l + (top - mp.mpf("1e-6")) / n
        d = det(lam, M, x)
        if d == 0 or (d > 0) != (prev > 0):
            root = mp.findroot(lambda l: det(l, M, x), (prev_l, lam), solver="anderson")
            out.append(root)
            if len(out) == count:
                return out
        prev_l, prev = lam, d
    raise RuntimeError("not enough roots")


def gap(M, x):
    l1, l2 = eigenvalues(M, x)
    return l2 - l1


if __name__ == "__main__":
    cases = [(100, mp.pi / 20), (50, "0.2216491044"), (1e4, "0.01570795228"), (3.5, "0.7"), (1000, "0.05")]
    for M, x in cases:
        l = eigenvalues(M, x)
        print("M", M, "x", mp.nstr(mp.mpf(x), 15), "l1", mp.nstr(l[0], 20), "l2", mp.nstr(l[1], 20))
    # Optimal step gap by golden section on the 40-digit gap.
    for M, lo, hi in [(50, "0.20", "0.24"), (100, "0.14", "0.17"), (1000, "0.045", "0.052")]:
        lo, hi = mp.mpf(lo), mp.mpf(hi)
        g = (mp.sqrt(5) - 1) / 2
        a, b = lo, hi
        c, d = b - g * (b - a), a + g * (b - a)
        fc, fd = gap(M, c), gap(M, d)
        for _ in range(60):
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - g * (b - a)
                fc = gap(M, c)
            else:
                a, c, fc = c, d, fd
                d = a + g * (b - a)
                fd = gap(M, d)
        xs = (a + b) / 2
        print("optimum M", M, "x*", mp.nstr(xs, 12), "gamma*", mp.nstr(gap(M, xs), 16))
