"""Dirichlet eigenvalues of -u'' + u/x = lambda u on (0, pi]: the regular
solution is the Coulomb wave F_0(eta, k x) with k = sqrt(lambda), eta = 1/(2k)."""
import mpmath as mp

mp.mp.dps = 30


def f(lam):
    k = mp.sqrt(lam)
    return mp.coulombf(0, 1 / (2 * k), k * mp.pi)


for guess in (1.73, 4.96):
    print(mp.nstr(mp.findroot(f, guess), 20))
