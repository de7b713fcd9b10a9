"""Root data of small rank: roots, Weyl group, reduced words, Bruhat order.

Conventions.  ``cartan[i][j] = <alpha_i^vee, alpha_j>`` (Bourbaki numbering).
Roots are stored in simple-root coordinates.  The lattice is either the weight
lattice (``sc``, basis the fundamental weights) or the root lattice (``ad``,
basis the simple roots); lattice vectors are integer tuples in that basis.

Weyl group elements are enumerated breadth first by right multiplication with
simple reflections taken in ascending order.  The word recorded for each
element is therefore its lexicographically smallest reduced word, and every
prefix of a recorded word is again a recorded word.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import ParseError, UnsupportedDatumError

MAX_RANK = {"A": 4, "B": 4, "C": 4, "D": 4, "G": 2}
MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3, "G": 2}


def cartan_matrix(kind, rank):
    """Cartan matrix of an irreducible type (or A1xA1)."""
    if kind == "A1xA1":
        return ((2, 0), (0, 2))
    if kind not in MAX_RANK:
        raise UnsupportedDatumError(f"unknown Cartan type {kind!r}")
    if not MIN_RANK[kind] <= rank <= MAX_RANK[kind]:
        raise UnsupportedDatumError(f"type {kind} needs rank in [{MIN_RANK[kind]}, {MAX_RANK[kind]}]")
    n = rank
    C = [[0] * n for _ in range(n)]
    for i in range(n):
        C[i][i] = 2
    if kind == "G":
        # alpha_1 short, alpha_2 long
        C[0][1], C[1][0] = -3, -1
        return tuple(map(tuple, C))
    chain = n - 1 if kind != "D" else n - 2
    for i in range(chain):
        C[i][i + 1] = C[i + 1][i] = -1
    if kind == "B":  # alpha_n short
        C[n - 1][n - 2] = -2
    elif kind == "C":  # alpha_n long
        C[n - 2][n - 1] = -2
    elif kind == "D":
        C[n - 3][n - 1] = C[n - 1][n - 3] = -1
    return tuple(map(tuple, C))


def _det(M):
    M = [[Fraction(x) for x in row] for row in M]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            for k in range(c, n):
                M[r][k] -= f * M[c][k]
    return det


def _matmul(A, B):
    n = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _matvec(A, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in A)


@dataclass(frozen=True)
class TorsionInfo:
    order: int  # |weight lattice / root lattice|
    torsion_primes: tuple


# order of the fundamental group and torsion primes, per irreducible type
_TORSION = {
    "B": (2, (2,)),
    "C": (2, ()),
    "D": (4, (2,)),
    "G": (1, (2,)),
    "F": (1, (2, 3)),
    "E6": (3, (2, 3)),
    "E7": (2, (2, 3)),
    "E8": (1, (2, 3, 5)),
}


def torsion_info(kind, rank):
    """Tabulated |Lambda_w / Lambda_r| and torsion primes of the root system."""
    if kind == "A1xA1":
        return TorsionInfo(4, ())
    if kind == "A":
        return TorsionInfo(rank + 1, ())
    if kind == "B" and rank == 2:
        kind = "C"  # B2 = C2
    if kind == "E":
        kind = f"E{rank}"
    if kind not in _TORSION:
        raise UnsupportedDatumError(f"no torsion data for {kind}{rank}")
    order, primes = _TORSION[kind]
    return TorsionInfo(order, primes)


@dataclass(frozen=True)
class WeylElement:
    index: int
    word: tuple
    matrix: tuple  # action on lattice coordinates (column vectors)

    @property
    def length(self):
        return len(self.word)


class RootDatum:
    """A semisimple root datum (type, rank, lattice) with its Weyl group."""

    def __init__(self, kind, rank, lattice="sc"):
        if lattice not in ("sc", "ad"):
            raise UnsupportedDatumError(f"lattice must be 'sc' or 'ad', not {lattice!r}")
        if kind == "A1xA1":
            rank = 2
        self.kind = kind
        self.rank = rank
        self.lattice = lattice
        self.cartan = cartan_matrix(kind, rank)
        n = rank
        # Lambda coordinates of the simple roots
        if lattice == "sc":
            self.simple = tuple(tuple(self.cartan[k][j] for k in range(n)) for j in range(n))
        else:
            self.simple = tuple(tuple(int(k == j) for k in range(n)) for j in range(n))
        self._build_roots()
        self._build_weyl()

    # naming -------------------------------------------------------------------
    @property
    def name(self):
        base = "A1xA1" if self.kind == "A1xA1" else f"{self.kind}{self.rank}"
        return f"{base}:{self.lattice}"

    def __repr__(self):
        return f"RootDatum({self.name})"

    # pairings -------------------------------------------------------------------
    def pair(self, i, lam):
        """<alpha_i^vee, lam> for a lattice vector lam."""
        if self.lattice == "sc":
            return lam[i]
        return sum(self.cartan[i][j] * lam[j] for j in range(self.rank))

    def root_vector(self, r):
        """Lattice coordinates of root index r."""
        return self._root_lam[r]

    # roots --------------------------------------------------------------------------
    def _build_roots(self):
        n = self.rank
        C = self.cartan
        simple = [tuple(int(k == j) for k in range(n)) for j in range(n)]
        seen = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for b in frontier:
                for i in range(n):
                    c = sum(C[i][j] * b[j] for j in range(n))
                    r = tuple(b[k] - c * (k == i) for k in range(n))
                    if r not in seen:
                        seen.add(r)
                        nxt.append(r)
            frontier = nxt
        pos = sorted((r for r in seen if all(x >= 0 for x in r)), key=lambda r: (sum(r), [-x for x in r]))
        self.positive = tuple(pos)
        self.roots = self.positive + tuple(tuple(-x for x in r) for r in pos)
        self.index = {r: k for k, r in enumerate(self.roots)}
        self.npos = len(pos)
        self._root_lam = tuple(
            tuple(sum(r[j] * self.simple[j][k] for j in range(n)) for k in range(n)) for r in self.roots
        )
        self._lam_index = {v: k for k, v in enumerate(self._root_lam)}

    def root_index(self, coords):
        """Index of the root with the given simple-root coordinates."""
        try:
            return self.index[tuple(coords)]
        except KeyError:
            raise ValueError(f"{tuple(coords)} is not a root") from None

    def is_root(self, coords):
        return tuple(coords) in self.index

    def negate(self, r):
        return r + self.npos if r < self.npos else r - self.npos

    def is_positive(self, r):
        return r < self.npos

    def simple_index(self, i):
        return self.index[tuple(int(k == i) for k in range(self.rank))]

    def root_add(self, r, s):
        """Index of roots[r] + roots[s], or None when the sum is not a root."""
        v = tuple(a + b for a, b in zip(self.roots[r], self.roots[s]))
        return self.index.get(v)

    def root_label(self, r):
        coords = self.roots[r]
        sign = "-" if r >= self.npos else ""
        body = "+".join(
            (f"{abs(c)}a{k + 1}" if abs(c) != 1 else f"a{k + 1}") for k, c in enumerate(coords) if c
        )
        return f"{sign}({body})" if sign and "+" in body else sign + body

    # Weyl group ------------------------------------------------------------------
    def _reflection_matrix(self, i):
        n = self.rank
        a = self.simple[i]
        cols = []
        for k in range(n):
            e = tuple(int(j == k) for j in range(n))
            c = self.pair(i, e)
            cols.append(tuple(e[j] - c * a[j] for j in range(n)))
        return tuple(tuple(cols[k][j] for k in range(n)) for j in range(n))

    def _build_weyl(self):
        n = self.rank
        ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        self.generators = [self._reflection_matrix(i) for i in range(n)]
        elems = [WeylElement(0, (), ident)]
        where = {ident: 0}
        frontier = [0]
        while frontier:
            nxt = []
            for w in frontier:
                for i in range(n):
                    M = _matmul(elems[w].matrix, self.generators[i])
                    if M not in where:
                        where[M] = len(elems)
                        elems.append(WeylElement(len(elems), elems[w].word + (i,), M))
                        nxt.append(where[M])
            frontier = nxt
        self.weyl = elems
        self._where = where
        self.order = len(elems)
        self._mult = {}
        self.longest = max(range(len(elems)), key=lambda k: elems[k].length)
        self.N = elems[self.longest].length
        if self.N != self.npos:
            raise AssertionError("length of the longest element differs from the number of positive roots")
        # action on roots
        self._root_perm = []
        for w in elems:
            self._root_perm.append(tuple(self._lam_index[_matvec(w.matrix, v)] for v in self._root_lam))
        self._simple_refl = [where[g] for g in self.generators]

    def element(self, word):
        """Index of the product s_{i1} ... s_{ik}."""
        w = 0
        for i in word:
            w = self.mult(w, self._simple_refl[i])
        return w

    def mult(self, a, b):
        key = (a, b)
        r = self._mult.get(key)
        if r is None:
            r = self._where[_matmul(self.weyl[a].matrix, self.weyl[b].matrix)]
            self._mult[key] = r
        return r

    def is_reduced(self, seq):
        return self.length(self.element(seq)) == len(seq)

    def inverse(self, w):
        return self.element(tuple(reversed(self.weyl[w].word)))

    def simple_reflection(self, i):
        return self._simple_refl[i]

    def act_root(self, w, r):
        return self._root_perm[w][r]

    def act_lattice(self, w, lam):
        return _matvec(self.weyl[w].matrix, lam)

    def reflection(self, r):
        """Weyl index of the reflection along root r."""
        cache = self.__dict__.setdefault("_refl_cache", {})
        if r in cache:
            return cache[r]
        target = r if r < self.npos else self.negate(r)
        for w in range(self.order):
            for i in range(self.rank):
                if self.act_root(w, self.simple_index(i)) == target:
                    s = self.mult(self.mult(w, self._simple_refl[i]), self.inverse(w))
                    cache[r] = s
                    return s
        raise AssertionError("root not in the orbit of a simple root")

    def inversions(self, w):
        """Positive roots sent to negative roots by w^{-1}."""
        wi = self.inverse(w)
        return tuple(r for r in range(self.npos) if not self.is_positive(self.act_root(wi, r)))

    def length(self, w):
        return self.weyl[w].length

    def word(self, w):
        return self.weyl[w].word

    @cached_property
    def m(self):
        """Orders m_ij of s_i s_j."""
        n = self.rank
        out = [[1] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                g = self.mult(self._simple_refl[i], self._simple_refl[j])
                k, p = 1, g
                while p != 0:
                    p = self.mult(p, g)
                    k += 1
                out[i][j] = k
        return out

    def bruhat_ideal(self, w):
        """All v <= w, as products of subwords of the recorded word of w."""
        cache = self.__dict__.setdefault("_ideal_cache", {})
        if w not in cache:
            ideal = {0}
            for i in self.weyl[w].word:
                s = self._simple_refl[i]
                ideal |= {self.mult(u, s) for u in ideal}
            cache[w] = frozenset(ideal)
        return cache[w]

    def bruhat_leq(self, v, w):
        return v in self.bruhat_ideal(w)

    def by_length(self, descending=False):
        order = sorted(range(self.order), key=lambda w: (self.length(w), self.word(w)))
        return order[::-1] if descending else order

    def orbit(self, lam):
        seen = []
        for w in range(self.order):
            v = self.act_lattice(w, lam)
            if v not in seen:
                seen.append(v)
        return seen

    # lattice invariants -----------------------------------------------------------
    def cartan_det(self):
        return int(_det(self.cartan))

    def torsion(self):
        return torsion_info(self.kind, self.rank)

    def simple_pairs(self):
        """Ordered pairs (i, j), i != j, with m_ij."""
        return [(i, j, self.m[i][j]) for i in range(self.rank) for j in range(self.rank) if i != j]


def parse_datum(text):
    """``A2:sc``, ``B2:ad``, ``A1xA1:sc``; also ``A:2:sc``."""
    parts = text.strip().split(":")
    if len(parts) == 3:
        kind, rank, lattice = parts
    elif len(parts) == 2:
        head, lattice = parts
        if head == "A1xA1":
            kind, rank = "A1xA1", "2"
        else:
            kind, rank = head[:1], head[1:]
    elif len(parts) == 1:
        head, lattice = parts[0], "sc"
        kind, rank = ("A1xA1", "2") if head == "A1xA1" else (head[:1], head[1:])
    else:
        raise ParseError(f"cannot parse root datum {text!r}")
    if not rank.isdigit():
        raise ParseError(f"bad rank in {text!r}")
    return RootDatum(kind.upper() if kind != "A1xA1" else kind, int(rank), lattice)
