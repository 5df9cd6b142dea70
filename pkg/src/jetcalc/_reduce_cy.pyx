# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled polynomial reduction engine.

Same contract as _reduce_py (which holds the reference implementation and
the docstrings); monomials are exponent tuples, coefficients are ints or
parameter-polynomial dicts manipulated through the kit objects.
"""
import heapq

from .errors import BudgetExceeded
from ._reduce_py import IntKit, PzKit

IMPLEMENTATION = "cython"


cdef int _cmp_c(tuple m1, tuple m2, tuple blocks) except? -2:
    cdef Py_ssize_t bi, vi, nb, nv
    cdef long d1, d2, a, b
    cdef tuple block
    nb = len(blocks)
    for bi in range(nb):
        block = <tuple> blocks[bi]
        nv = len(block)
        d1 = 0
        d2 = 0
        for vi in range(nv):
            d1 += <long> m1[<Py_ssize_t> block[vi]]
            d2 += <long> m2[<Py_ssize_t> block[vi]]
        if d1 != d2:
            return 1 if d1 > d2 else -1
        for vi in range(nv - 1, -1, -1):
            a = <long> m1[<Py_ssize_t> block[vi]]
            b = <long> m2[<Py_ssize_t> block[vi]]
            if a != b:
                return 1 if a < b else -1
    return 0


def cmp_mono(m1, m2, blocks):
    return _cmp_c(m1, m2, blocks)


def mono_key(m, blocks):
    key = []
    cdef Py_ssize_t bi, vi
    cdef long d
    cdef tuple block
    for bi in range(len(blocks)):
        block = <tuple> blocks[bi]
        d = 0
        for vi in range(len(block)):
            d += <long> m[<Py_ssize_t> block[vi]]
        key.append(d)
        for vi in range(len(block) - 1, -1, -1):
            key.append(-(<long> m[<Py_ssize_t> block[vi]]))
    return tuple(key)


def lead_mono(p, blocks):
    cdef tuple best = None
    cdef tuple m
    for m in p:
        if best is None or _cmp_c(m, best, blocks) > 0:
            best = m
    return best


cdef inline bint _divides_c(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    for i in range(n):
        if <long> a[i] > <long> b[i]:
            return 0
    return 1


cdef tuple _mono_sub_c(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    return tuple([(<long> a[i]) - (<long> b[i]) for i in range(n)])


cdef tuple _mono_mul_c(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    return tuple([(<long> a[i]) + (<long> b[i]) for i in range(n)])


cdef tuple _mono_lcm_c(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef long x, y
    out = []
    for i in range(n):
        x = <long> a[i]
        y = <long> b[i]
        out.append(x if x > y else y)
    return tuple(out)


def content_normalize(p, kit):
    if not p:
        return p
    g = kit.content(list(p.values()))
    if not kit.is_one(g):
        p = {m: kit.divexact(c, g) for m, c in p.items()}
    if kit.is_neg(p[max(p)]):
        p = {m: kit.neg(c) for m, c in p.items()}
    return p


cdef dict _scale_sub_c(dict p, object a, object q, tuple bmono, dict b, kit):
    cdef dict out = {}
    mul = kit.mul
    add = kit.add
    neg = kit.neg
    cdef bint a_is_one = kit.is_one(a)
    if a_is_one:
        out.update(p)
    else:
        for m, c in p.items():
            out[m] = mul(a, c)
    for m, c in b.items():
        mm = _mono_mul_c(<tuple> m, bmono)
        d = mul(q, c)
        cur = out.get(mm)
        nc = neg(d) if cur is None else add(cur, neg(d))
        if nc:
            out[mm] = nc
        else:
            out.pop(mm, None)
    return out


def reduce_full(p, basis, leads, blocks, kit):
    cdef bint is_int = kit is IntKit
    one = 1 if is_int else {(): 1}
    num = one
    den = one
    cdef dict r = dict(p)
    cdef set done = set()
    cdef Py_ssize_t nb = len(basis), gi, hit
    cdef tuple m, cand, lead
    while True:
        m = None
        for cand in r:
            if cand in done:
                continue
            if m is None or _cmp_c(cand, m, blocks) > 0:
                m = cand
        if m is None:
            break
        hit = -1
        for gi in range(nb):
            if _divides_c(<tuple> leads[gi], m):
                hit = gi
                break
        if hit < 0:
            done.add(m)
            continue
        g = <dict> basis[hit]
        lead = <tuple> leads[hit]
        lg = g[lead]
        c = r[m]
        r = _scale_sub_c(r, lg, c, _mono_sub_c(m, lead), g, kit)
        num = num * lg if is_int else kit.mul(num, lg)
        if len(r) > 4:
            gc = kit.content(list(r.values()))
            if not kit.is_one(gc):
                r = {mm: kit.divexact(cc, gc) for mm, cc in r.items()}
                den = den * gc if is_int else kit.mul(den, gc)
    return r, num, den


def poly_mul(a, b, kit):
    cdef dict out = {}
    mul = kit.mul
    add = kit.add
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _mono_mul_c(<tuple> ma, <tuple> mb)
            cur = out.get(m)
            c = mul(ca, cb) if cur is None else add(cur, mul(ca, cb))
            if c:
                out[m] = c
            else:
                out.pop(m, None)
    return out


def spoly(f, lf, g, lg, kit):
    L = _mono_lcm_c(<tuple> lf, <tuple> lg)
    shifted = {_mono_mul_c(_mono_sub_c(L, <tuple> lf), <tuple> m): c
               for m, c in (<dict> f).items()}
    return _scale_sub_c(shifted, (<dict> g)[lg], (<dict> f)[lf],
                        _mono_sub_c(L, <tuple> lg), <dict> g, kit)


def buchberger(gens, blocks, kit, budget=10000):
    basis = []
    leads = []
    for p in gens:
        if p:
            basis.append(content_normalize(p, kit))
            leads.append(lead_mono(p, blocks))
    cdef long npairs = 0, budget_c = budget
    pairs = []
    cdef Py_ssize_t i, j, k, t
    for i in range(len(basis)):
        for j in range(i):
            L = _mono_lcm_c(<tuple> leads[j], <tuple> leads[i])
            heapq.heappush(pairs, (mono_key(L, blocks), j, i))
    processed = set()
    while pairs:
        key, i, j = heapq.heappop(pairs)
        processed.add((i, j))
        npairs += 1
        if npairs > budget_c:
            raise BudgetExceeded(f"S-polynomial budget {budget} exceeded")
        L = _mono_lcm_c(<tuple> leads[i], <tuple> leads[j])
        if L == _mono_mul_c(<tuple> leads[i], <tuple> leads[j]):
            continue
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
            L = _mono_lcm_c(<tuple> leads[t], <tuple> leads[k])
            heapq.heappush(pairs, (mono_key(L, blocks), t, k))
    return _autoreduce(basis, leads, blocks, kit)


def _chain_skip(i, j, L, leads, processed):
    cdef Py_ssize_t k, n = len(leads)
    for k in range(n):
        if k == i or k == j:
            continue
        if _divides_c(<tuple> leads[k], <tuple> L):
            p1 = (i, k) if i < k else (k, i)
            p2 = (j, k) if j < k else (k, j)
            if p1 in processed and p2 in processed:
                return True
    return False


def _autoreduce(basis, leads, blocks, kit):
    idx = sorted(range(len(basis)), key=lambda i: mono_key(leads[i], blocks))
    keep = []
    for i in idx:
        ok = True
        for j in keep:
            if _divides_c(<tuple> leads[j], <tuple> leads[i]):
                ok = False
                break
        if ok:
            keep.append(i)
    polys = [basis[i] for i in keep]
    lds = [leads[i] for i in keep]
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
