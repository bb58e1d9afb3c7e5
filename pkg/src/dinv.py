"""
Correction Terms - d-invariants of lens spaces and Seifert fibered spaces
Lens spaces use the recursion; Seifert fibered spaces maximize characteristic
squares on their negative definite star-shaped plumbing
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from algebra import FinAbGroup, GroupElement, IntSymMatrix, is_negative_definite, two_torsion
from qforms import QuadraticForm, sq_table

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeifertData:
    """Unnormalized Seifert invariants Y(e; (a1,b1), ..., (ar,br))"""

    e: int
    pairs: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        for alpha, beta in self.pairs:
            if alpha <= 1:
                raise ValueError(f"fiber multiplicity must exceed 1, got ({alpha},{beta})")
            if gcd(alpha, beta) != 1:
                raise ValueError(f"pair ({alpha},{beta}) is not coprime")

    @classmethod
    def of(cls, e: int, pairs: Sequence[Sequence[int]]) -> "SeifertData":
        return cls(int(e), tuple((int(a), int(b)) for a, b in pairs))

    @property
    def euler(self) -> Fraction:
        return self.e + sum((Fraction(b, a) for a, b in self.pairs), Fraction(0))

    @property
    def order(self) -> int:
        """|H_1|, zero when Y is not a rational homology sphere"""
        product = 1
        for a, _ in self.pairs:
            product *= a
        return abs(int(product * self.euler))

    def is_normalized(self) -> bool:
        return all(0 < b < a for a, b in self.pairs)

    def __str__(self) -> str:
        return f"Y({self.e};" + ",".join(f"({a},{b})" for a, b in self.pairs) + ")"


@dataclass(frozen=True)
class PlumbingGraph:
    """Weighted plumbing tree; vertex 0 is the centre of a star"""

    weights: Tuple[int, ...]
    edges: Tuple[Tuple[int, int], ...]

    @property
    def matrix(self) -> IntSymMatrix:
        n = len(self.weights)
        rows = [[0] * n for _ in range(n)]
        for i, w in enumerate(self.weights):
            rows[i][i] = w
        for u, v in self.edges:
            rows[u][v] = rows[v][u] = 1
        return IntSymMatrix.from_rows(rows)


@dataclass
class CorrectionTable:
    """d(Y, t) on H^2(Y) relative to a spin origin at element 0"""

    group: FinAbGroup
    d: Dict[GroupElement, Fraction]
    source: str
    negated: bool = False
    labels: Optional[Dict[GroupElement, int]] = field(default=None, compare=False)

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def spin_elements(self) -> List[GroupElement]:
        return two_torsion(self.group)

    def __call__(self, x: GroupElement) -> Fraction:
        return self.d[x]

    def values(self) -> List[Fraction]:
        return sorted(self.d.values())

    def reversed(self) -> "CorrectionTable":
        """Table of -Y: every value negated"""
        return CorrectionTable(self.group, {x: -v for x, v in self.d.items()},
                               f"-{self.source}", not self.negated, self.labels)


def _lens_d_cached(p: int, q: int) -> Tuple[Fraction, ...]:
    return _lens_d(p, q % p if p > 1 else 0)


@lru_cache(maxsize=None)
def _lens_d(p: int, q: int) -> Tuple[Fraction, ...]:
    if p == 1:
        return (Fraction(0),)
    r = p % q
    inner = _lens_d(q, r if q > 1 else 0)
    values = []
    for i in range(p):
        # labels stay inside [0, p + q) so the inner index is i mod q
        head = Fraction(p * q - (2 * i + 1 - p - q) ** 2, 4 * p * q)
        values.append(head - inner[i % q])
    return tuple(values)


def lens_d(p: int, q: int) -> List[Fraction]:
    """d(L(p,q), i) for i = 0 .. p-1"""
    if p < 1 or gcd(p, q) != 1:
        raise ValueError(f"L({p},{q}) needs p >= 1 and gcd(p, q) = 1")
    return list(_lens_d_cached(p, q))


def lens_conjugate(p: int, q: int, i: int) -> int:
    return (q - i - 1) % p


def lens_spin_label(p: int, q: int) -> int:
    """Smallest label fixed by conjugation"""
    return next(i for i in range(p) if lens_conjugate(p, q, i) == i)


@lru_cache(maxsize=None)
def lens_table(p: int, q: int) -> CorrectionTable:
    """CorrectionTable of L(p,q) from the recursion, element x <-> label x + spin label"""
    values = lens_d(p, q)
    if p == 1:
        group = FinAbGroup()
        zero = group.zero()
        return CorrectionTable(group, {zero: Fraction(0)}, "L(1,0)", labels={zero: 0})
    group = FinAbGroup((p,))
    i0 = lens_spin_label(p, q % p)
    d, labels = {}, {}
    for x in group.elements():
        label = (x.coords[0] + i0) % p
        d[x] = values[label]
        labels[x] = label
    return CorrectionTable(group, d, f"L({p},{q % p})", labels=labels)


def normalize_seifert(data: SeifertData) -> SeifertData:
    """Move every beta into (0, alpha), keeping e + sum beta/alpha fixed"""
    if data.euler == 0:
        raise ValueError("not a rational homology sphere")
    e = data.e
    pairs = []
    for alpha, beta in data.pairs:
        reduced = beta % alpha
        e += (beta - reduced) // alpha
        pairs.append((alpha, reduced))
    return SeifertData(e, tuple(pairs))


def reverse_orientation(data: SeifertData) -> SeifertData:
    return normalize_seifert(SeifertData(-data.e, tuple((a, -b) for a, b in data.pairs)))


def hirzebruch_jung(num: int, den: int) -> List[int]:
    """num/den = [a1, ..., am] = a1 - 1/(a2 - ...) with every ai >= 2"""
    if den <= 0 or num <= den:
        raise ValueError(f"{num}/{den} must exceed 1")
    terms = []
    while den:
        a = -(-num // den)
        terms.append(a)
        num, den = den, a * den - num
    return terms


def plumbing_from_seifert(data: SeifertData) -> PlumbingGraph:
    """Star plumbing: centre -e-r, leg i carries -eta from alpha/(alpha-beta)"""
    if not data.is_normalized():
        raise ValueError(f"{data} is not normalized")
    weights = [-data.e - len(data.pairs)]
    edges = []
    for alpha, beta in data.pairs:
        previous = 0
        for eta in hirzebruch_jung(alpha, alpha - beta):
            weights.append(-eta)
            edges.append((previous, len(weights) - 1))
            previous = len(weights) - 1
    return PlumbingGraph(tuple(weights), tuple(edges))


def lens_plumbing(p: int, q: int) -> PlumbingGraph:
    """Linear plumbing with weights -a_i, p/q = [a1, ..., am]"""
    terms = hirzebruch_jung(p, q % p)
    weights = tuple(-a for a in terms)
    edges = tuple((i, i + 1) for i in range(len(terms) - 1))
    return PlumbingGraph(weights, edges)


def table_from_plumbing(graph: PlumbingGraph, source: str) -> CorrectionTable:
    """d = (sq + |G|) / 4 on a negative definite plumbing"""
    form = QuadraticForm(graph.matrix)
    squares = sq_table(form)
    n = len(graph.weights)
    d = {x: (v + n) / 4 for x, v in squares.sq.items()}
    return CorrectionTable(squares.group, d, source)


@lru_cache(maxsize=None)
def _correction_table(data: SeifertData) -> CorrectionTable:
    graph = plumbing_from_seifert(data)
    if is_negative_definite(graph.matrix):
        logger.debug(f"{data}: plumbing is negative definite")
        return table_from_plumbing(graph, str(data))
    reverse = reverse_orientation(data)
    graph = plumbing_from_seifert(reverse)
    if not is_negative_definite(graph.matrix):
        raise ValueError(f"no definite plumbing for {data}")
    logger.info(f"{data}: using the reversed orientation {reverse}")
    table = table_from_plumbing(graph, str(reverse))
    return CorrectionTable(table.group, {x: -v for x, v in table.d.items()}, str(data), negated=True)


def correction_table(data: SeifertData) -> CorrectionTable:
    """Correction terms of Y, memoized per normalized datum"""
    return _correction_table(normalize_seifert(data))
