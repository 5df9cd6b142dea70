"""Pure-Python polynomial reduction engine.

Polynomials are dicts mapping exponent tuples to coefficients; coefficients
are ints or parameter polynomials (see coeffs.pz_*), and all arithmetic is
fraction-free: reduction steps cross-multiply by leading coefficients and
intermediate results are divided by their content.

The compiled twin (_reduce_cy) exposes the same functions; ideal.py picks
one at import time.
"""
from .errors import BudgetExceeded

IMPLEMENTATION = "python"


# --- coefficient kits -------------------------------------------------------

def _int_gcd_many(vals):
    from math import gcd
    g = 0
    for v in vals:
        g = gcd(g, v if v >= 0 else -v)
        if g == 1:
            break
    return g


class IntKit:
    name = "int"

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def is_neg(a):
        return a < 0

    @staticmethod
    def content(vals):
        return _int_gcd_many(vals)

    @staticmethod
    def divexact(a, g):
        return a // g

    @staticmethod
    def is_one(a):
        return a == 1


class PzKit:
    """Coefficients are parameter polynomials (dict monomial -> int)."""
    name = "pz"

    @staticmethod
    def mul(a, b):
        from .coeffs import pz_mul
        return pz_mul(a, b)

    @staticmethod
    def add(a, b):
        from .coeffs import pz_add
        return pz_add(a, b)

    @staticmethod
    def neg(a):
        from .coeffs import pz_neg
        return pz_neg(a)

    @staticmethod
    def is_neg(a):
        from .coeffs import pz_lead_sign
        return pz_lead_sign(a) < 0

    @staticmethod
    def content(vals):
        from .coeffs import pz_gcd
        g = {}
        for v in vals:
            g = pz_gcd(g, v)
        return g

    @staticmethod
    def divexact(a, g):
        from .coeffs import pz_divexact
        return pz_divexact(a, g)

    @staticmethod
    def is_one(a):
        return len(a) == 1 and not any(next(iter(a))) and a[next(iter(a))] == 1


# --- monomial order ---------------------------------------------------------
# blocks: tuple of tuples of variable indices; comparison is block by block,
# graded reverse-lexicographic inside each block.

def cmp_mono(m1, m2, blocks):
    for block in blocks:
        d1 = 0
        d2 = 0
        for v in block:
            d1 += m1[v]
            d2 += m2[v]
        if d1 != d2:
            return 1 if d1 > d2 else -1
        for v in reversed(block):
            a = m1[v]
            b = m2[v]
            if a != b:
                return 1 if a < b else -1
    return 0


def mono_key(m, blocks):
    """Flat tuple whose lexicographic order equals cmp_mono."""
    key = []
    for block in blocks:
        key.append(sum(m[v] for v in block))
        key.extend(-m[v] for v in reversed(block))
    return tuple(key)


def lead_mono(p, blocks):
    best = None
    for m in p:
        if best is None or cmp_mono(m, best, blocks) > 0:
            best = m
    return best


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _mono_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mono_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


# --- polynomial helpers -----------------------------------------------------

def content_normalize(p, kit):
    """Divide by the content; make the coefficient at the lead-lex monomial
    positive.  Returns the normalized polynomial."""
    if not p:
        return p
    g = kit.content(list(p.values()))
    if not kit.is_one(g):
        p = {m: kit.divexact(c, g) for m, c in p.items()}
    if kit.is_neg(p[max(p)]):
        p = {m: kit.neg(c) for m, c in p.items()}
    return p


def _scale_sub(p, a, q, bmono, b, kit):
    """a*p - q*(bmono * b), dropping zero coefficients."""
    out = {}
    mul = kit.mul
    if kit.is_one(a):
        out.update(p)
    else:
        for m, c in p.items():
            out[m] = mul(a, c)
    add = kit.add
    neg = kit.neg
    for m, c in b.items():
        mm = _mono_mul(m, bmono)
        d = mul(q, c)
        cur = out.get(mm)
        nc = neg(d) if cur is None else add(cur, neg(d))
        if nc:
            out[mm] = nc
        else:
            out.pop(mm, None)
    return out


def reduce_full(p, basis, leads, blocks, kit):
    """Fraction-free full normal form of p against basis.

    Returns (remainder, mult_num, mult_den): the field normal form equals
    remainder * mult_den / mult_num after dividing coefficients.
    """
    one = 1 if kit.name == "int" else {(): 1}
    num = one
    den = one
    r = dict(p)
    done = set()
    nb = len(basis)
    while True:
        m = None
        for cand in r:
            if cand in done:
                continue
            if m is None or cmp_mono(cand, m, blocks) > 0:
                m = cand
        if m is None:
            break
        hit = -1
        for gi in range(nb):
            if _divides(leads[gi], m):
                hit = gi
                break
        if hit < 0:
            done.add(m)
            continue
        g = basis[hit]
        lg = g[leads[hit]]
        c = r[m]
        r = _scale_sub(r, lg, c, _mono_sub(m, leads[hit]), g, kit)
        num = kit.mul(num, lg)
        if len(r) > 4:
            gc = kit.content(list(r.values()))
            if not kit.is_one(gc):
                r = {mm: kit.divexact(cc, gc) for mm, cc in r.items()}
                den = kit.mul(den, gc)
    return r, num, den


def poly_mul(a, b, kit):
    out = {}
    mul = kit.mul
    add = kit.add
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _mono_mul(ma, mb)
            cur = out.get(m)
            c = mul(ca, cb) if cur is None else add(cur, mul(ca, cb))
            if c:
                out[m] = c
            else:
                out.pop(m, None)
    return out


def spoly(f, lf, g, lg, kit):
    L = _mono_lcm(lf, lg)
    s = _scale_sub({_mono_mul(_mono_sub(L, lf), m): c for m, c in f.items()},
                   g[lg], f[lf], _mono_sub(L, lg), g, kit)
    return s


def buchberger(gens, blocks, kit, budget=10000):
    """Reduced Groebner basis of the given polynomials (deterministic)."""
    import heapq

    basis = []
    leads = []
    for p in gens:
        if p:
            basis.append(content_normalize(p, kit))
            leads.append(lead_mono(p, blocks))
    npairs = 0
    pairs = []
    for i in range(len(basis)):
        for j in range(i):
            heapq.heappush(pairs, _make_pair(j, i, leads, blocks))
    processed = set()
    while pairs:
        key, i, j = heapq.heappop(pairs)
        processed.add((i, j))
        npairs += 1
        if npairs > budget:
            raise BudgetExceeded(f"S-polynomial budget {budget} exceeded")
        L = _mono_lcm(leads[i], leads[j])
        if L == _mono_mul(leads[i], leads[j]):
            continue  # coprime leads
        if _chain_skip(i, j, L, leads, processed):
            continue
        s = spoly(basis[i], leads[i], basis[j], leads[j], kit)
        if not s:
            continue
        r, _, _ = reduce_full(s, basis, leads, blocks, kit)
        if not r:
            continue
        r = content_normalize(r, kit)
        basis.append(r)
        leads.append(lead_mono(r, blocks))
        k = len(basis) - 1
        for t in range(k):
            heapq.heappush(pairs, _make_pair(t, k, leads, blocks))
    return _autoreduce(basis, leads, blocks, kit)


def _make_pair(i, j, leads, blocks):
    L = _mono_lcm(leads[i], leads[j])
    return (mono_key(L, blocks), i, j)


def _chain_skip(i, j, L, leads, processed):
    for k in range(len(leads)):
        if k == i or k == j:
            continue
        if _divides(leads[k], L):
            p1 = (min(i, k), max(i, k))
            p2 = (min(j, k), max(j, k))
            if p1 in processed and p2 in processed:
                return True
    return False


def _autoreduce(basis, leads, blocks, kit):
    # minimal basis: keep an element only if no kept lead divides its lead
    idx = sorted(range(len(basis)), key=lambda i: mono_key(leads[i], blocks))
    keep = []
    for i in idx:
        if not any(_divides(leads[j], leads[i]) for j in keep):
            keep.append(i)
    polys = [basis[i] for i in keep]
    lds = [leads[i] for i in keep]
    # tail-reduce each element against the others until stable
    changed = True
    while changed:
        changed = False
        for i in range(len(polys)):
            others = polys[:i] + polys[i + 1:]
            olds = lds[:i] + lds[i + 1:]
            if not others:
                continue
            r, _, _ = reduce_full(polys[i], others, olds, blocks, kit)
            r = content_normalize(r, kit)
            if r != polys[i]:
                changed = True
                if not r:
                    del polys[i]
                    del lds[i]
                    break
                polys[i] = r
                lds[i] = lead_mono(r, blocks)
    order = sorted(range(len(polys)),
                   key=lambda i: mono_key(lds[i], blocks), reverse=True)
    return [polys[i] for i in order]
