"""Schottky groups on the real line, conjugacy classes, and geodesic length spectra.

Schottky data lives in the half-plane model: every disk is a Euclidean disk
centered on the real axis, so disjointness reduces to interval arithmetic.
Symbols are nonzero integers: +j is the j-th generator, -j its inverse.
Generator j maps the exterior of disk D(-j) onto the interior of disk D(+j).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    DiskOverlap,
    MonotonicityError,
    NonHyperbolicGenerator,
    PairingMismatch,
)
from .moebius import GEN_V, GEN_X_PERP, BoundaryPoint, MoebiusMap, cayley_to_disk, exp_sl2

# exp(t * GEN_X_PERP) translates along the geodesic with endpoints (-1, 1);
# presets hang their axes off this one.
_AXIS = GEN_X_PERP

Word = tuple[int, ...]


class Convention(str, enum.Enum):
    """How conjugacy classes are counted.

    ORIENTED: classes modulo cyclic rotation only; a geodesic and its reverse
    are distinct.  This is the count realized by the transfer-operator
    determinant.  UNORIENTED additionally folds a class with its inverse.
    """

    ORIENTED = "oriented"
    UNORIENTED = "unoriented"


@dataclass(frozen=True)
class LineDisk:
    """Closed Euclidean disk centered on the real axis."""

    center: float
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("disk radius must be positive")

    @property
    def interval(self) -> tuple[float, float]:
        return self.center - self.radius, self.center + self.radius

    def contains_real(self, x: float, slack: float = 0.0) -> bool:
        return abs(x - self.center) <= self.radius + slack

    def boundary_samples(self, n: int = 16) -> np.ndarray:
        ang = np.pi * np.arange(n + 1) / n  # upper semicircle incl. endpoints
        return self.center + self.radius * np.exp(1j * ang)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    error: Exception | None
    min_gap: float
    max_pairing_residual: float

    def raise_if_invalid(self) -> None:
        if not self.ok:
            raise self.error


@dataclass(frozen=True)
class SchottkyGroup:
    """Free group of hyperbolic maps pairing 2r disjoint line-centered disks."""

    generators: tuple[MoebiusMap, ...]
    disks_pos: tuple[LineDisk, ...]  # D(+1..+r)
    disks_neg: tuple[LineDisk, ...]  # D(-1..-r)

    @classmethod
    def from_generators(cls, generators: Sequence[MoebiusMap]) -> "SchottkyGroup":
        """Build with isometric-circle disks: D(-j) = {|c z + d| = 1} of g_j."""
        pos, neg = [], []
        for g in generators:
            if abs(g.c) < 1e-14:
                raise NonHyperbolicGenerator(
                    "generator fixes the point at infinity; conjugate the group first"
                )
            neg.append(LineDisk(-g.d / g.c, 1.0 / abs(g.c)))
            gi = g.inverse()
            pos.append(LineDisk(-gi.d / gi.c, 1.0 / abs(gi.c)))
        return cls(tuple(generators), tuple(pos), tuple(neg))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def symbols(self) -> tuple[int, ...]:
        r = self.rank
        return tuple(range(1, r + 1)) + tuple(range(-1, -r - 1, -1))

    def generator(self, symbol: int) -> MoebiusMap:
        if symbol > 0:
            return self.generators[symbol - 1]
        return self.generators[-symbol - 1].inverse()

    def disk(self, symbol: int) -> LineDisk:
        if symbol > 0:
            return self.disks_pos[symbol - 1]
        return self.disks_neg[-symbol - 1]

    def euler_characteristic(self) -> int:
        """1 - rank for a free group of Moebius maps."""
        return 1 - self.rank

    def matrix_of_word(self, word: Word) -> MoebiusMap:
        m = MoebiusMap.identity()
        for letter in word:
            m = m.compose(self.generator(letter))
        return m

    def contains_in_disks(self, x: float, slack: float = 1e-9) -> bool:
        return any(self.disk(s).contains_real(x, slack) for s in self.symbols)

    def validate(self, pairing_tol: float = 1e-10, n_samples: int = 24) -> ValidationReport:
        """Check hyperbolicity, disk disjointness, and the pairing property."""
        bad = ValidationReport
        for j, g in enumerate(self.generators, start=1):
            if g.classify() != "hyperbolic":
                return bad(False, NonHyperbolicGenerator(
                    f"generator {j} is {g.classify()}"), math.nan, math.nan)
        intervals = sorted(
            (self.disk(s).interval, s) for s in self.symbols
        )
        min_gap = math.inf
        for (iv_a, sym_a), (iv_b, sym_b) in zip(intervals, intervals[1:]):
            gap = iv_b[0] - iv_a[1]
            min_gap = min(min_gap, gap)
            if gap <= 0:
                return bad(False, DiskOverlap(
                    f"disks {sym_a} and {sym_b} overlap (gap {gap:.3e})"), gap, math.nan)
        worst = 0.0
        for j in range(1, self.rank + 1):
            g = self.generator(j)
            src, dst = self.disk(-j), self.disk(j)
            for z in src.boundary_samples(n_samples):
                w = (g.a * z + g.b) / (g.c * z + g.d)
                worst = max(worst, abs(abs(w - dst.center) - dst.radius))
            far = g.act_halfplane(src.center + 17.0 * src.radius)
            inside = abs(far - dst.center) < dst.radius
            if worst > pairing_tol or not inside:
                return bad(False, PairingMismatch(
                    f"generator {j} does not map ext(D({-j})) onto int(D({j})) "
                    f"(boundary residual {worst:.3e}, exterior sample inside: {inside})"),
                    min_gap, worst)
        return ValidationReport(True, None, min_gap, worst)

    def ensure_valid(self) -> None:
        self.validate().raise_if_invalid()


# -- words ---------------------------------------------------------------

def is_reduced(word: Word) -> bool:
    return all(word[i + 1] != -word[i] for i in range(len(word) - 1))

def is_cyclically_reduced(word: Word) -> bool:
    return is_reduced(word) and (len(word) < 2 or word[0] != -word[-1])

def invert_word(word: Word) -> Word:
    return tuple(-x for x in reversed(word))

def cyclic_rotations(word: Word) -> list[Word]:
    return [word[i:] + word[:i] for i in range(len(word))]

def is_primitive_word(word: Word) -> bool:
    n = len(word)
    for d in range(1, n):
        if n % d == 0 and word == word[:d] * (n // d):
            return False
    return True

def _letter_order(word: Word) -> tuple:
    # reading order a < a^-1 < b < b^-1 < ...
    return tuple((abs(x), 0 if x > 0 else 1) for x in word)

def canonical_class_rep(word: Word, convention: Convention) -> Word:
    cands = cyclic_rotations(word)
    if convention is Convention.UNORIENTED:
        cands += cyclic_rotations(invert_word(word))
    return min(cands, key=_letter_order)


def reduced_words(rank: int, length: int) -> Iterator[Word]:
    """All reduced words of exactly the given length."""
    symbols = list(range(1, rank + 1)) + list(range(-1, -rank - 1, -1))
    def extend(prefix: Word) -> Iterator[Word]:
        if len(prefix) == length:
            yield prefix
            return
        for s in symbols:
            if prefix and s == -prefix[-1]:
                continue
            yield from extend(prefix + (s,))
    yield from extend(())


def count_reduced_words(rank: int, length: int) -> int:
    if length == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (length - 1)


@dataclass(frozen=True)
class PrimitiveGeodesic:
    """Primitive conjugacy class with its geodesic length and matrix trace."""

    word: Word
    length: float
    trace: float

    @property
    def word_length(self) -> int:
        return len(self.word)


@dataclass(frozen=True)
class LengthSpectrum:
    geodesics: tuple[PrimitiveGeodesic, ...]
    cutoff: float
    convention: Convention

    def __len__(self) -> int:
        return len(self.geodesics)

    @property
    def lengths(self) -> np.ndarray:
        return np.array([g.length for g in self.geodesics])

    def counting(self, length: float) -> int:
        return int(np.sum(self.lengths <= length))


def _classes_at_length(group: SchottkyGroup, n: int, convention: Convention,
                       seen: set[Word]) -> list[PrimitiveGeodesic]:
    out = []
    for w in reduced_words(group.rank, n):
        if not is_cyclically_reduced(w) or not is_primitive_word(w):
            continue
        canon = canonical_class_rep(w, convention)
        if w != canon or canon in seen:
            continue
        seen.add(canon)
        m = group.matrix_of_word(canon)
        tr = m.trace
        out.append(PrimitiveGeodesic(canon, 2.0 * math.acosh(abs(tr) / 2.0), tr))
    return out


def conjugacy_classes(group: SchottkyGroup, max_word_len: int,
                      convention: Convention = Convention.ORIENTED,
                      word_cap: int = 10**7) -> list[PrimitiveGeodesic]:
    """All primitive classes with cyclically reduced word length <= max_word_len,
    each exactly once under the chosen convention, sorted by (word length, word)."""
    group.ensure_valid()
    total = sum(count_reduced_words(group.rank, n) for n in range(1, max_word_len + 1))
    if total > word_cap:
        raise BudgetExceeded(f"{total} words exceed cap {word_cap}")
    seen: set[Word] = set()
    out: list[PrimitiveGeodesic] = []
    for n in range(1, max_word_len + 1):
        out.extend(sorted(_classes_at_length(group, n, convention, seen),
                          key=lambda g: _letter_order(g.word)))
    return out


def contraction_log_bounds(group: SchottkyGroup) -> dict[tuple[int, int], float]:
    """-log sup_{z in D_i} |g_j'(z)| for every admissible transition i -> j.

    g_j' has its pole at the center region of D(-j), so on any other disk
    |g_j'(z)| = 1/(c_j |z - pole|)^2 is maximized at the near edge.  For
    isometric-circle disks every bound is positive (|g'| = 1 exactly on
    the boundary of D(-j) and < 1 outside).
    """
    out = {}
    for j in group.symbols:
        g = group.generator(j)
        pole = -g.d / g.c
        for i in group.symbols:
            if i == -j:
                continue
            di = group.disk(i)
            dist = abs(pole - di.center) - di.radius
            if dist <= 0:
                raise DiskOverlap(f"disk {i} touches the pole of branch {j}")
            kappa = 1.0 / (g.c * dist) ** 2
            out[(i, j)] = -math.log(kappa)
    return out


def length_spectrum(group: SchottkyGroup, length_cutoff: float,
                    convention: Convention = Convention.ORIENTED,
                    word_cap: int = 10**7) -> LengthSpectrum:
    """Every primitive geodesic of length <= cutoff.

    Completeness is certified by branch-derivative bounds: the multiplier of a
    cyclic word is a product of one-step derivatives evaluated inside the
    disks, so l(word) >= sum of per-transition bounds, and the word search can
    prune any prefix whose bound already exceeds the cutoff.  Falls back to
    shell-by-shell enumeration (requiring monotone per-shell minima) when a
    transition bound is not contracting.
    """
    report = group.validate()
    report.raise_if_invalid()
    try:
        logk = contraction_log_bounds(group)
    except DiskOverlap:
        logk = None
    if logk is not None and min(logk.values()) <= 0:
        logk = None
    if logk is None:
        return _length_spectrum_shells(group, length_cutoff, convention, word_cap)

    symbols = group.symbols
    seen: set[Word] = set()
    kept: list[PrimitiveGeodesic] = []
    visited = 0

    def walk(prefix: Word, bound: float):
        nonlocal visited
        visited += 1
        if visited > word_cap:
            raise BudgetExceeded(f"word cap {word_cap} exhausted during spectrum search")
        if prefix and prefix[0] != -prefix[-1]:
            cyc_bound = bound + (logk[(prefix[-1], prefix[0])] if len(prefix) > 1 else 0.0)
            if cyc_bound <= length_cutoff and is_primitive_word(prefix):
                canon = canonical_class_rep(prefix, convention)
                if canon not in seen:
                    seen.add(canon)
                    m = group.matrix_of_word(canon)
                    ell = 2.0 * math.acosh(abs(m.trace) / 2.0)
                    if ell <= length_cutoff:
                        kept.append(PrimitiveGeodesic(canon, ell, m.trace))
        for s in symbols:
            if prefix and s == -prefix[-1]:
                continue
            nb = bound + (logk[(prefix[-1], s)] if prefix else 0.0)
            if nb > length_cutoff:
                continue
            walk(prefix + (s,), nb)

    walk((), 0.0)
    kept.sort(key=lambda g: (g.length, _letter_order(g.word)))
    return LengthSpectrum(tuple(kept), length_cutoff, convention)


def _length_spectrum_shells(group: SchottkyGroup, length_cutoff: float,
                            convention: Convention, word_cap: int,
                            margin: float = 0.5, max_word_len: int = 64) -> LengthSpectrum:
    seen: set[Word] = set()
    kept: list[PrimitiveGeodesic] = []
    shell_minima: list[float] = []
    enumerated = 0
    for n in range(1, max_word_len + 1):
        enumerated += count_reduced_words(group.rank, n)
        if enumerated > word_cap:
            raise BudgetExceeded(f"word cap {word_cap} hit at shell {n}")
        classes = _classes_at_length(group, n, convention, seen)
        if not classes:
            if group.rank == 1:
                break  # a cyclic group has no classes beyond one-letter words
            continue
        m = min(g.length for g in classes)
        if shell_minima and m < shell_minima[-1] - 1e-12:
            raise MonotonicityError(
                f"shell {n} minimum {m:.6f} dropped below previous "
                f"{shell_minima[-1]:.6f}; stopping rule unsound for this group")
        shell_minima.append(m)
        kept.extend(g for g in classes if g.length <= length_cutoff)
        if m > length_cutoff + margin:
            break
    else:
        raise BudgetExceeded(f"no shell exceeded cutoff within {max_word_len} letters")
    kept.sort(key=lambda g: (g.length, _letter_order(g.word)))
    return LengthSpectrum(tuple(kept), length_cutoff, convention)


def limit_set_sample(group: SchottkyGroup, depth: int) -> list[BoundaryPoint]:
    """Attracting fixed points (disk-model boundary angles) of all reduced words
    of the given length."""
    group.ensure_valid()
    if depth < 1:
        raise ValueError("depth must be >= 1")
    pts = []
    for w in reduced_words(group.rank, depth):
        m = group.matrix_of_word(w)
        _, att = m.fixed_points_halfplane()
        pts.append(BoundaryPoint.from_point(cayley_to_disk(att)))
    return pts


# -- presets ----------------------------------------------------------------

def cylinder(length: float) -> SchottkyGroup:
    """Elementary rank-1 group: hyperbolic cylinder with core length `length`."""
    if length <= 0:
        raise ValueError("length must be positive")
    return SchottkyGroup.from_generators([exp_sl2(_AXIS, length)])


def pair_of_pants(l1: float, l2: float, l3: float) -> SchottkyGroup:
    """Three-funnel surface with funnel geodesic lengths (l1, l2, l3).

    Generators satisfy tr(X1) = 2 cosh(l1/2), tr(X2) = 2 cosh(l2/2) and
    tr(X1 X2) = -2 cosh(l3/2).
    """
    if min(l1, l2, l3) <= 0:
        raise ValueError("funnel lengths must be positive")
    ch1, sh1 = math.cosh(l1 / 2), math.sinh(l1 / 2)
    ch2, sh2 = math.cosh(l2 / 2), math.sinh(l2 / 2)
    c = (-math.cosh(l3 / 2) - ch1 * ch2) / (sh1 * sh2)
    mu = c - math.sqrt(c * c - 1.0)
    x1 = MoebiusMap(ch1, sh1, sh1, ch1)
    x2 = MoebiusMap(ch2, mu * sh2, sh2 / mu, ch2)
    group = SchottkyGroup.from_generators([x1, x2])
    group.ensure_valid()
    return group


def funneled_torus(l1: float, l2: float, twist: float) -> SchottkyGroup:
    """One-holed torus: two crossing hyperbolic generators; the boundary funnel
    is the commutator.  The second axis crosses the first at flow time `twist`
    from its summit, rotated by a right angle."""
    if min(l1, l2) <= 0:
        raise ValueError("core lengths must be positive")
    x1 = exp_sl2(_AXIS, l1)
    k = exp_sl2(GEN_V, math.pi / 2)
    f = exp_sl2(_AXIS, twist)
    conj = f.compose(k)
    x2 = conj.compose(exp_sl2(_AXIS, l2)).compose(conj.inverse())
    group = SchottkyGroup.from_generators([x1, x2])
    group.ensure_valid()
    return group


def funnel_chain(rank: int, length: float, spacing: float) -> SchottkyGroup:
    """rank generators with parallel axes (-1,1)+k*spacing: a sphere with
    rank+1 funnels, Euler characteristic 1-rank."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    gens = []
    base = exp_sl2(_AXIS, length)
    for k in range(rank):
        p = (k - (rank - 1) / 2.0) * spacing
        t = MoebiusMap(1.0, p, 0.0, 1.0)
        gens.append(t.compose(base).compose(t.inverse()))
    group = SchottkyGroup.from_generators(gens)
    group.ensure_valid()
    return group
