"""theta = tan(theta), the limit gap, and the reduced system at its endpoints (50 digits)."""
import mpmath as mp

mp.mp.dps = 50

theta = mp.findroot(lambda t: mp.tan(t) - t, 4.4934)
print("theta", mp.nstr(theta, 20))
print("limit_gap", mp.nstr((theta / mp.pi) ** 2, 20))


def reduced(y1):
    r = mp.findroot(lambda r: y1 * mp.sin(mp.pi * r) - r * mp.cos(mp.pi * r), (1.0 + 1e-30, 1.5 - 1e-30), solver="anderson")
    s = mp.findroot(lambda s: y1 * mp.tanh(mp.pi * s) - s, 1.5)
    return r, s


upper = mp.mpf(3) / (2 * mp.tanh(3 * mp.pi / 2))
r, s = reduced(upper)
print("upper_y1", mp.nstr(upper, 20))
print("r_upper", mp.nstr(r, 20), "s_upper", mp.nstr(s, 20))
print("gap_upper", mp.nstr(r * r + s * s, 20))
for y1 in (mp.mpf("0.5"), mp.mpf(1)):
    r, s = reduced(y1)
    print("y1", y1, "r", mp.nstr(r, 20), "s", mp.nstr(s, 20), "gap", mp.nstr(r * r + s * s, 20))
