from mpmath import mp, mpf, sqrt, sin, asin, pi, quad
mp.dps = 40
def length(n):
    a = lambda i: sqrt(2)*(1-mpf(1)/i)
    def w(t):
        v = abs(sin(t))
        d = mpf(1)
        for i in (n, n+1):
            d = min(d, sqrt(1 - sqrt(2)*a(i)*v + a(i)**2))
        return 1/d
    kinks = [a(n)/sqrt(2), a(n+1)/sqrt(2), (a(n)+a(n+1))/sqrt(2)]
    pts = {mpf(0), pi/2, pi}
    for v in kinks:
        if v < 1:
            pts.add(asin(v)); pts.add(pi-asin(v))
    pts = sorted(pts)
    return quad(w, pts, maxdegree=10)
for n in (2,3,12): print(n, mp.nstr(length(n), 20))
