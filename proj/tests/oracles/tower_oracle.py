# Copyright 2026 The rscoop Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Brute-force tower-field oracle used to freeze expected values in the C++ tests.

Independent of the C++ implementation: plain polynomial arithmetic, no tables.
Run: python3 tests/oracles/tower_oracle.py
"""
import itertools


def poly_mod(a, m, add, mul, neg, inv):
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            break
        c = mul(a[-1], inv(m[-1]))
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = add(a[shift + i], neg(mul(c, mc)))
        a.pop()
    return (a + [0] * dm)[:dm]


class Prime:
    def __init__(self, p):
        self.p, self.size = p, p
    def add(self, a, b): return (a + b) % self.p
    def mul(self, a, b): return (a * b) % self.p
    def neg(self, a): return (-a) % self.p
    def inv(self, a): return pow(a, self.p - 2, self.p)


class Ext:
    """GF(q^d) over base with elements encoded as base-q integers."""
    def __init__(self, base, m):
        self.base, self.m, self.d = base, m, len(m) - 1
        self.size = base.size ** self.d
        self._inv = {}
    def dec(self, x):
        q = self.base.size
        return [(x // q ** i) % q for i in range(self.d)]
    def enc(self, c):
        q = self.base.size
        return sum(v * q ** i for i, v in enumerate(c))
    def add(self, a, b):
        return self.enc([self.base.add(x, y) for x, y in zip(self.dec(a), self.dec(b))])
    def neg(self, a):
        return self.enc([self.base.neg(x) for x in self.dec(a)])
    def mul(self, a, b):
        A, Bv = self.dec(a), self.dec(b)
        prod = [0] * (2 * self.d - 1)
        for i, x in enumerate(A):
            for j, y in enumerate(Bv):
                prod[i + j] = self.base.add(prod[i + j], self.base.mul(x, y))
        b_ = self.base
        return self.enc(poly_mod(prod, self.m, b_.add, b_.mul, b_.neg, b_.inv))
    def inv(self, a):
        if not self._inv:
            for x in range(1, self.size):
                for y in range(1, self.size):
                    if self.mul(x, y) == 1:
                        self._inv[x] = y
                        break
        return self._inv[a]
    def pow(self, a, e):
        r = 1
        for _ in range(e):
            r = self.mul(r, a)
        return r


def irreducible(base, coeffs):
    """coeffs: c0..c_{d-1}, monic degree d. Root-free + no factor of degree <= d/2."""
    d = len(coeffs)
    m = list(coeffs) + [1]
    for k in range(1, d // 2 + 1):
        for low in itertools.product(range(base.size), repeat=k):
            f = list(low) + [1]
            r = poly_mod(m, f, base.add, base.mul, base.neg, base.inv)
            if not any(r):
                return False
    return True


def canonical_modulus(base, d):
    q = base.size
    for n in range(q ** d):
        coeffs = [(n // q ** i) % q for i in range(d)]
        if irreducible(base, coeffs):
            return coeffs + [1]


def tower(p, s, t):
    gp = Prime(p)
    mb = canonical_modulus(gp, s)
    B = Ext(gp, mb)
    mf = canonical_modulus(B, t)
    F = Ext(B, mf)
    return B, F, mb, mf


def trace(F, B, x):
    acc = 0
    y = x
    for _ in range(F.d):
        acc = F.add(acc, y)
        y = F.pow(y, B.size)
    assert acc < B.size
    return acc


def kernel_elems(F, B, pred):
    return [x for x in range(F.size) if pred(x)]


def greedy_basis(F, B, elems, start=()):
    """Greedy enumeration-order basis via brute-force span sets."""
    basis = list(start)
    span = span_set(F, B, basis)
    for x in elems:
        if x not in span:
            basis.append(x)
            span = span_set(F, B, basis)
    return basis


def span_set(F, B, basis):
    out = {0}
    for b in basis:
        new = set()
        for v in out:
            for c in range(B.size):
                new.add(F.add(v, F.mul(c, b)))
        out = new
    return out


def main():
    for (p, s, t) in [(2, 1, 2), (3, 1, 2), (2, 1, 4), (2, 2, 3), (5, 1, 2), (2, 1, 3)]:
        B, F, mb, mf = tower(p, s, t)
        print(f"tower {p},{s},{t}: mB={mb} mF={mf}")
        tr = [trace(F, B, x) for x in range(F.size)]
        delta = next(x for x in range(F.size) if tr[x] == 1)
        K = [x for x in range(F.size) if tr[x] == 0]
        gamma = next(x for x in K if x != 0)
        kb = greedy_basis(F, B, K)
        print(f"  delta={delta} gamma={gamma} K basis={kb} |K|={len(K)}")

    # GF(16) triple (0,1,2): K123 canonical basis and extension into K12
    B, F, _, _ = tower(2, 1, 4)
    tr = lambda x: trace(F, B, x)
    a1, a2, a3 = 0, 1, 2
    d12 = F.add(a1, F.neg(a2))
    d23 = F.add(a2, F.neg(a3))
    K12 = [x for x in range(F.size) if tr(F.mul(d12, x)) == 0]
    K23 = set(x for x in range(F.size) if tr(F.mul(d23, x)) == 0)
    K123 = [x for x in K12 if x in K23]
    b123 = greedy_basis(F, B, K123)
    ext = greedy_basis(F, B, K12, b123)
    print(f"GF16 triple(0,1,2): K123 basis={b123} K12 ext={ext}")
    # dims of all triples
    dims = set()
    for tri in itertools.combinations(range(16), 3):
        x1, x2, x3 = tri
        cnt = sum(1 for x in range(16) if tr(F.mul(x1, x)) == tr(F.mul(x2, x)) == tr(F.mul(x3, x)))
        dims.add(cnt)
    print(f"GF16 |K123| over all triples: {dims}")

    # GF(16) two-erasure pattern {0,1}: u basis and the exchange coefficients a
    d = F.add(0, F.neg(1))
    K12 = [x for x in range(F.size) if tr(F.mul(d, x)) == 0]
    u = greedy_basis(F, B, K12)
    delta = next(x for x in range(F.size) if tr(x) == 1)
    u.append(F.mul(delta, F.inv(d)))
    gamma = next(x for x in range(1, F.size) if tr(x) == 0)
    target = F.inv(d)
    gu = [F.mul(gamma, x) for x in u]
    sols = []
    for coeffs in itertools.product(range(B.size), repeat=len(gu)):
        acc = 0
        for c, v in zip(coeffs, gu):
            acc = F.add(acc, F.mul(c, v))
        if acc == target:
            sols.append(coeffs)
    print(f"GF16 pair(0,1): U'={u} gamma={gamma} a={sols}")

    # GF(9): element at index 3, Tr(2), GF(4) dual basis of {1, w}
    B, F, _, _ = tower(3, 1, 2)
    print(f"GF9 Tr(2)={trace(F, B, 2)} Tr(x)={trace(F, B, 3)}")
    B, F, _, _ = tower(2, 1, 2)
    print(f"GF4 w*w={F.mul(2, 2)}")

    # GF(16) codeword of f(x) = 1 + 2x + ... + 8x^7 on the full field, and
    # GRS multipliers of the length-10 prefix code.
    B, F, _, _ = tower(2, 1, 4)
    coeffs = list(range(1, 9))
    word = []
    for a in range(16):
        acc = 0
        for c in reversed(coeffs):
            acc = F.add(F.mul(acc, a), c)
        word.append(acc)
    print(f"GF16 codeword={word}")
    lam = []
    for a in range(10):
        prod = 1
        for b in range(10):
            if b != a:
                prod = F.mul(prod, F.add(a, F.neg(b)))
        lam.append(F.inv(prod))
    print(f"GF16 prefix10 lambda={lam}")

    # GF(9), erased {0,1,2}, delta = 2: mixed-term matrix m[k][e] such that
    # Tr(P_k,t(a_e) c_e) = m[k][e] Tr(c_e/(a1-a2)).
    B, F, _, _ = tower(3, 1, 2)
    pts = [0, 1, 2]
    D = F.add(pts[0], F.neg(pts[1]))
    ut = F.mul(2, F.inv(D))
    m = []
    for k in range(3):
        row = []
        for e in range(3):
            if e == k:
                val = ut
            else:
                diff = F.add(pts[e], F.neg(pts[k]))
                val = F.mul(trace(F, B, F.mul(ut, diff)), F.inv(diff))
            row.append(F.mul(val, D))
        m.append(row)
    print(f"GF9 mixing matrix={m}")


if __name__ == "__main__":
    main()
