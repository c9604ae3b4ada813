"""Certificate-producing deciders for point sets in Z_p^d.

Given a finite set E of points, decide whether E tiles the group by
translation, whether it is spectral, and whether it is a graph on a
subspace.  Searches are exhaustive and deterministic (lexicographic
branching everywhere); every positive answer comes with a certificate that
an independent verifier can re-check.

Exactness: no complex arithmetic appears anywhere.  A sum of p-th roots of
unity sum_k omega^{c_k} vanishes iff the exponent multiset {c_k} hits every
residue class mod p equally often, because for prime p the minimal
polynomial of omega over the rationals is 1 + X + ... + X^{p-1}, so the only
rational linear relations among 1, omega, ..., omega^{p-1} are multiples of
the all-one relation.  Orthogonality of two characters over E is therefore
*equivalent* to the pairing vector ((lam - lam')*x)_{x in E} being
equidistributed mod p, and all spectral checks below reduce to exact integer
counting.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

from .gfmat import GFMatrix, check_prime, rank, row_reduce

DEFAULT_UNIVERSE_BOUND = 1 << 20

Point = tuple[int, ...]


class UniverseBoundError(RuntimeError):
    """The ambient group p^d is larger than the configured budget."""


class AmbientMismatchError(ValueError):
    """Two point sets do not live in the same Z_p^d."""


@dataclass(frozen=True)
class PointSet:
    """A nonempty set of distinct points of Z_p^d with its ambient (p, d)."""

    p: int
    d: int
    points: frozenset[Point]

    def __post_init__(self) -> None:
        check_prime(self.p)
        if self.d < 1:
            raise ValueError("dimension must be positive")
        if not self.points:
            raise ValueError("point set must be nonempty")
        for pt in self.points:
            if len(pt) != self.d:
                raise ValueError(f"point {pt} does not have dimension {self.d}")
            for c in pt:
                if not 0 <= c < self.p:
                    raise ValueError(f"coordinate {c} out of range for Z_{self.p}")

    @classmethod
    def from_points(cls, p: int, d: int, pts: Iterable[Sequence[int]]) -> "PointSet":
        """Build a set, reducing coordinates mod p; duplicates after reduction are an error."""
        reduced = [tuple(c % p for c in pt) for pt in pts]
        if len(set(reduced)) != len(reduced):
            raise ValueError("duplicate points")
        return cls(p, d, frozenset(reduced))

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def zero(self) -> Point:
        return (0,) * self.d

    def sorted_points(self) -> tuple[Point, ...]:
        return tuple(sorted(self.points))

    def translate(self, t: Sequence[int]) -> "PointSet":
        if len(t) != self.d:
            raise ValueError("translation vector has wrong dimension")
        p = self.p
        return PointSet(self.p, self.d,
                        frozenset(tuple((a + b) % p for a, b in zip(pt, t)) for pt in self.points))

    def normalize(self) -> "PointSet":
        """Translate so the lexicographically least point becomes the origin."""
        base = min(self.points)
        return self.translate(tuple(-c % self.p for c in base))

    def linear_image(self, a: GFMatrix) -> "PointSet":
        """Image under the linear map x -> A.x; the map must be injective on the set."""
        if a.p != self.p or a.num_cols != self.d:
            raise ValueError("matrix does not act on this ambient")
        p = self.p
        imgs = frozenset(tuple(sum(row[j] * pt[j] for j in range(self.d)) % p for row in a.rows)
                         for pt in self.points)
        if len(imgs) != self.size:
            raise ValueError("linear map is not injective on the set")
        return PointSet(self.p, a.num_rows, imgs)


def _check_same_ambient(a: PointSet, b: PointSet) -> None:
    if (a.p, a.d) != (b.p, b.d):
        raise AmbientMismatchError(f"ambients differ: Z_{a.p}^{a.d} vs Z_{b.p}^{b.d}")


@dataclass(frozen=True)
class TilingCertificate:
    """A translation set T whose translates of E partition the group."""

    translations: PointSet


@dataclass(frozen=True)
class SpectrumCertificate:
    """An exponent set whose characters form an orthogonal basis on E."""

    exponents: PointSet


@dataclass(frozen=True)
class GraphWitness:
    """Bases of V and of a kernel complement W with V + W = Z_p^d (direct sum).

    The projection along W maps the witnessed set bijectively onto V.
    """

    subspace_basis: tuple[Point, ...]
    complement_basis: tuple[Point, ...]


class _Ambient:
    """Index arithmetic for Z_p^d: points are encoded as mixed-radix integers.

    Coordinate 0 is the most significant digit, so index order equals
    lexicographic order of coordinate tuples.  For p = 2 the encoding is
    plain binary and the group operation is XOR (packed fast path); the
    generic digit-wise path must agree with it.
    """

    __slots__ = ("p", "d", "order")

    def __init__(self, p: int, d: int):
        self.p = p
        self.d = d
        self.order = p ** d

    def encode(self, pt: Sequence[int]) -> int:
        idx = 0
        for c in pt:
            idx = idx * self.p + c
        return idx

    def decode(self, idx: int) -> Point:
        p = self.p
        out = [0] * self.d
        for i in range(self.d - 1, -1, -1):
            idx, out[i] = divmod(idx, p)
        return tuple(out)

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self._generic_add(a, b)

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self._generic_sub(a, b)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self._generic_sub(0, a)

    def dot(self, a: int, b: int) -> int:
        if self.p == 2:
            return (a & b).bit_count() & 1
        return self._generic_dot(a, b)

    def _generic_add(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        mul = 1
        for _ in range(self.d):
            out += ((a + b) % p) * mul
            a //= p
            b //= p
            mul *= p
        return out

    def _generic_sub(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        mul = 1
        for _ in range(self.d):
            out += ((a - b) % p) * mul
            a //= p
            b //= p
            mul *= p
        return out

    def _generic_dot(self, a: int, b: int) -> int:
        p = self.p
        s = 0
        for _ in range(self.d):
            s += (a % p) * (b % p)
            a //= p
            b //= p
        return s % p


def _ambient_checked(ps: PointSet, max_universe: int) -> _Ambient:
    order = ps.p ** ps.d
    if order > max_universe:
        raise UniverseBoundError(
            f"p^d = {order} exceeds the configured universe bound {max_universe}")
    return _Ambient(ps.p, ps.d)


def _indices_of(amb: _Ambient, ps: PointSet) -> list[int]:
    return sorted(amb.encode(pt) for pt in ps.points)


def _points_of(amb: _Ambient, indices: Iterable[int], p: int, d: int) -> PointSet:
    return PointSet(p, d, frozenset(amb.decode(i) for i in indices))


# ---------------------------------------------------------------------------
# tiling


def _tiles_core(amb: _Ambient, e_idx: Sequence[int]) -> list[int] | None:
    """Exact cover of the group by translates of E; returns translate indices.

    Branches on the least uncovered element, trying the translates that cover
    it in index order; the canonical-victim rule kills permutation symmetry
    among translates, and the first solution found is the lexicographically
    least one.
    """
    order = amb.order
    size = len(e_idx)
    if order % size != 0:
        return None
    if size == 1:
        return list(range(order))
    if size == order:
        return [0]

    full = (1 << order) - 1
    tmask_cache: dict[int, int] = {}

    def tmask(t: int) -> int:
        m = tmask_cache.get(t)
        if m is None:
            m = 0
            for x in e_idx:
                m |= 1 << amb.add(x, t)
            tmask_cache[t] = m
        return m

    def candidates_for(covered: int) -> list[int]:
        free = full & ~covered
        g = (free & -free).bit_length() - 1
        return sorted({amb.sub(g, x) for x in e_idx})

    chosen: list[int] = []
    stack: list[list] = [[0, candidates_for(0), 0]]
    while stack:
        frame = stack[-1]
        covered, cands, pos = frame
        advanced = False
        while pos < len(cands):
            t = cands[pos]
            pos += 1
            m = tmask(t)
            if m & covered:
                continue
            frame[2] = pos
            chosen.append(t)
            nc = covered | m
            if nc == full:
                return chosen
            stack.append([nc, candidates_for(nc), 0])
            advanced = True
            break
        if not advanced:
            stack.pop()
            if chosen:
                chosen.pop()
    return None


def tiles(e: PointSet, *, max_universe: int = DEFAULT_UNIVERSE_BOUND) -> TilingCertificate | None:
    """Decide whether E tiles Z_p^d by translation.

    Pre-filter: |E| must divide p^d.  The search is an exhaustive exact-cover
    over translates and returns None only after exhausting it.
    """
    amb = _ambient_checked(e, max_universe)
    t_idx = _tiles_core(amb, _indices_of(amb, e))
    if t_idx is None:
        return None
    return TilingCertificate(_points_of(amb, t_idx, e.p, e.d))


def verify_tiling(e: PointSet, cert: TilingCertificate) -> bool:
    """Independent re-check of a tiling certificate (plain set arithmetic)."""
    t = cert.translations
    _check_same_ambient(e, t)
    p = e.p
    if e.size * t.size != p ** e.d:
        return False
    seen: set[Point] = set()
    for tr in t.points:
        for x in e.points:
            y = tuple((a + b) % p for a, b in zip(x, tr))
            if y in seen:
                return False
            seen.add(y)
    return len(seen) == p ** e.d


# ---------------------------------------------------------------------------
# spectrality


def _diffset_indices(amb: _Ambient, e_idx: Sequence[int]) -> list[int]:
    """Indices m != 0 whose pairing vector (m*x)_{x in E} is equidistributed."""
    n = len(e_idx)
    p = amb.p
    if n % p != 0:
        return []
    out: list[int] = []
    if p == 2:
        half = n // 2
        for m in range(1, amb.order):
            c = 0
            for x in e_idx:
                c += (m & x).bit_count() & 1
            if c == half:
                out.append(m)
    else:
        quota = n // p
        decoded = [amb.decode(x) for x in e_idx]
        for m in range(1, amb.order):
            md = amb.decode(m)
            counts = [0] * p
            ok = True
            for x in decoded:
                s = 0
                for a, b in zip(md, x):
                    s += a * b
                r = s % p
                counts[r] += 1
                if counts[r] > quota:
                    ok = False
                    break
            if ok:
                out.append(m)
    return out


def difference_set(e: PointSet, *, max_universe: int = DEFAULT_UNIVERSE_BOUND) -> frozenset[Point]:
    """The set D(E) of nonzero m with (m*x)_{x in E} equidistributed.

    Two exponents lam, lam' are orthogonal over E exactly when lam - lam'
    lies in D(E) (see the module docstring for why equidistribution is the
    right notion); spectra are precisely the |E|-cliques of the Cayley graph
    with connection set D(E).  May be empty.
    """
    amb = _ambient_checked(e, max_universe)
    return frozenset(amb.decode(m) for m in _diffset_indices(amb, _indices_of(amb, e)))


def _spectral_core(amb: _Ambient, e_idx: Sequence[int]) -> list[int] | None:
    """Clique search for a spectrum; 0 is fixed in the spectrum w.l.o.g.

    Pairwise differences are translation-invariant, so a set is a spectrum
    iff any translate is; fixing 0 loses nothing.  Branch-and-bound on the
    least candidate with the |chosen| + |candidates| bound; exhaustive, and
    the first hit is the lexicographically least spectrum containing 0.
    """
    size = len(e_idx)
    if size == 1:
        return [0]
    if size % amb.p != 0:
        return None
    d_idx = _diffset_indices(amb, e_idx)
    target = size - 1
    if len(d_idx) < target:
        return None
    dset = set(d_idx)
    nverts = len(d_idx)
    nb = []
    for i, v in enumerate(d_idx):
        m = 0
        for j, u in enumerate(d_idx):
            if j != i and amb.sub(u, v) in dset:
                m |= 1 << j
        nb.append(m)
    stack: list[tuple[tuple[int, ...], int]] = [((), (1 << nverts) - 1)]
    while stack:
        chosen, cand = stack.pop()
        if len(chosen) == target:
            return [0] + [d_idx[i] for i in chosen]
        if len(chosen) + cand.bit_count() < target:
            continue
        low = cand & -cand
        i = low.bit_length() - 1
        rest = cand ^ low
        stack.append((chosen, rest))
        stack.append((chosen + (i,), rest & nb[i]))
    return None


def spectral(e: PointSet, *, max_universe: int = DEFAULT_UNIVERSE_BOUND) -> SpectrumCertificate | None:
    """Decide whether E is spectral; returns a spectrum if one exists."""
    amb = _ambient_checked(e, max_universe)
    lam_idx = _spectral_core(amb, _indices_of(amb, e))
    if lam_idx is None:
        return None
    return SpectrumCertificate(_points_of(amb, lam_idx, e.p, e.d))


def spectral_naive(e: PointSet) -> SpectrumCertificate | None:
    """Brute-force oracle: try every exponent set of size |E| containing 0.

    Kept deliberately independent of the clique search; used to cross-check
    it on small ambients.
    """
    if e.size == 1:
        return SpectrumCertificate(PointSet(e.p, e.d, frozenset([e.zero])))
    all_pts = [pt for pt in product(range(e.p), repeat=e.d)]
    nonzero = [pt for pt in all_pts if any(pt)]
    for combo in combinations(nonzero, e.size - 1):
        lam = PointSet(e.p, e.d, frozenset((e.zero,) + combo))
        if verify_spectrum(e, lam):
            return SpectrumCertificate(lam)
    return None


def verify_spectrum(e: PointSet, lam: PointSet) -> bool:
    """True iff |lam| = |E| and all distinct exponent pairs are orthogonal over E.

    Orthogonality of the characters x -> omega^(lam*x) and x -> omega^(lam'*x)
    over E reduces to the pairing vector ((lam - lam')*x)_{x in E} being
    equidistributed mod p (module docstring).  Plain tuple arithmetic; this
    is the independent verifier for SpectrumCertificate values.
    """
    _check_same_ambient(e, lam)
    if lam.size != e.size:
        return False
    p = e.p
    n = e.size
    if n == 1:
        return True
    if n % p != 0:
        return False
    quota = n // p
    e_pts = e.sorted_points()
    lam_pts = lam.sorted_points()
    for i in range(len(lam_pts)):
        li = lam_pts[i]
        for j in range(i + 1, len(lam_pts)):
            diff = tuple((a - b) % p for a, b in zip(li, lam_pts[j]))
            counts = [0] * p
            ok = True
            for x in e_pts:
                r = sum(a * b for a, b in zip(diff, x)) % p
                counts[r] += 1
                if counts[r] > quota:
                    ok = False
                    break
            if not ok:
                return False
    return True


# ---------------------------------------------------------------------------
# graphs on subspaces


@lru_cache(maxsize=None)
def _subspaces(p: int, d: int, r: int) -> tuple[tuple[tuple[Point, ...], tuple[int, ...]], ...]:
    """All r-dimensional subspaces of Z_p^d as reduced-echelon bases with pivots.

    Deterministic lexicographic enumeration: pivot column combinations in
    order, then free entries in product order.
    """
    if r == 0:
        return (((), ()),)
    out = []
    for pivots in combinations(range(d), r):
        pivset = set(pivots)
        slots = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, d) if j not in pivset]
        for assign in product(range(p), repeat=len(slots)):
            rows = [[0] * d for _ in range(r)]
            for i, c in enumerate(pivots):
                rows[i][c] = 1
            for (i, j), v in zip(slots, assign):
                rows[i][j] = v
            out.append((tuple(tuple(row) for row in rows), tuple(pivots)))
    return tuple(out)


def _graph_core(p: int, d: int, pts: Sequence[Point]) -> GraphWitness | None:
    size = len(pts)
    k = 0
    t = 1
    while t < size:
        t *= p
        k += 1
    if t != size or k > d:
        return None
    r = d - k

    def unit(j: int) -> Point:
        return tuple(1 if i == j else 0 for i in range(d))

    if p == 2:
        masks = [sum(c << (d - 1 - i) for i, c in enumerate(pt)) for pt in pts]
        for basis, pivots in _subspaces(p, d, r):
            rowdata = [(sum(c << (d - 1 - i) for i, c in enumerate(row)), 1 << (d - 1 - c))
                       for row, c in zip(basis, pivots)]
            labels: set[int] = set()
            ok = True
            for x in masks:
                y = x
                for rowmask, pivbit in rowdata:
                    if y & pivbit:
                        y ^= rowmask
                if y in labels:
                    ok = False
                    break
                labels.add(y)
            if ok:
                v_basis = tuple(unit(j) for j in range(d) if j not in pivots)
                return GraphWitness(v_basis, basis)
        return None

    for basis, pivots in _subspaces(p, d, r):
        labels2: set[Point] = set()
        ok = True
        for x in pts:
            y = list(x)
            for row, c in zip(basis, pivots):
                f = y[c]
                if f:
                    for j in range(d):
                        y[j] = (y[j] - f * row[j]) % p
            ty = tuple(y)
            if ty in labels2:
                ok = False
                break
            labels2.add(ty)
        if ok:
            v_basis = tuple(unit(j) for j in range(d) if j not in pivots)
            return GraphWitness(v_basis, basis)
    return None


def graph_on_subspace(e: PointSet, *, max_universe: int = DEFAULT_UNIVERSE_BOUND) -> GraphWitness | None:
    """Find a subspace V and kernel complement W projecting E bijectively onto V.

    Requires |E| = p^k; the search enumerates the (d-k)-dimensional candidate
    kernels W and accepts W iff E meets every coset of W exactly once, which
    is the projection formulation restated coset-wise.
    """
    _ambient_checked(e, max_universe)
    return _graph_core(e.p, e.d, e.sorted_points())


def verify_graph_witness(e: PointSet, w: GraphWitness) -> bool:
    """Independent re-check of a graph witness via exact linear algebra.

    Checks dim V + dim W = d, that the two bases together span Z_p^d, and
    that expressing each point of E in the combined basis and keeping only
    the V-part hits |E| distinct points.
    """
    p, d = e.p, e.d
    kv = len(w.subspace_basis)
    kw = len(w.complement_basis)
    if kv + kw != d:
        return False
    if e.size != p ** kv:
        return False
    combined = w.subspace_basis + w.complement_basis
    if any(len(b) != d for b in combined):
        return False
    basis_matrix = GFMatrix.from_rows(p, combined)
    if rank(basis_matrix) != d:
        return False
    # Solve B^T c = x for every x in E in one elimination: RREF of [B^T | X].
    e_pts = e.sorted_points()
    bt_cols = list(zip(*combined))  # row i of B^T
    aug_rows = [tuple(bt_cols[i]) + tuple(x[i] for x in e_pts) for i in range(d)]
    rref, pivots = row_reduce(GFMatrix.from_rows(p, aug_rows))
    if pivots[:d] != tuple(range(d)):
        return False
    images: set[Point] = set()
    for col in range(len(e_pts)):
        coeffs = [rref.rows[i][d + col] for i in range(d)]
        img = tuple(
            sum(coeffs[bi] * w.subspace_basis[bi][j] for bi in range(kv)) % p for j in range(d)
        )
        if img in images:
            return False
        images.add(img)
    return len(images) == e.size
