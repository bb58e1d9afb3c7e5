"""
Links - Two-bridge and Montesinos links, their diagrams and four-ball genus bounds
Builds an explicit diagram from continued fractions, reads a Seifert matrix off the
orientable checkerboard surface and feeds the branched double cover to the
obstruction engine
"""

import itertools
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, gcd
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix

import twobridge
from algebra import FinAbGroup, IntSymMatrix, cokernel, inertia, signature as form_signature
from cyclotomic import MAX_ORDER, CyclotomicNumber, real_sign
from dinv import (CorrectionTable, SeifertData, correction_table, lens_table,
                  normalize_seifert, plumbing_from_seifert)
from obstruction import ObstructionReport, check_bound, check_rational_ball

logger = logging.getLogger(__name__)

TWO_BRIDGE = "two-bridge"
MONTESINOS = "montesinos"

GRAMMAR = 'S(p,q) or M(e;a1/b1,...,ar/br), e.g. "S(67,39)" or "M(1;3/1,3/1,5/2)"'

# hypercube sizes for the Taylor search pools
BOX_LIMIT = 400_000
POOL_LIMIT = 2_000
NODE_LIMIT = 50_000


class DescriptorError(ValueError):
    """Malformed link descriptor"""

    def __init__(self, message: str):
        super().__init__(message)
        self.hint = GRAMMAR


@dataclass(frozen=True)
class LinkDescriptor:
    """S(p,q) or M(e; (a1,b1), ..., (ar,br)), oriented as the boundary of its checkerboard surface"""

    kind: str
    p: int = 0
    q: int = 0
    e: int = 0
    pairs: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.kind == TWO_BRIDGE:
            if self.p < 2:
                raise ValueError(f"S({self.p},{self.q}) needs p >= 2")
            if gcd(self.p, self.q) != 1:
                raise ValueError(f"S({self.p},{self.q}) needs gcd(p, q) = 1")
        elif self.kind == MONTESINOS:
            for alpha, beta in self.pairs:
                if alpha <= 1:
                    raise ValueError(f"tangle {alpha}/{beta} needs alpha > 1")
                if gcd(alpha, beta) != 1:
                    raise ValueError(f"tangle {alpha}/{beta} is not reduced")
        else:
            raise ValueError(f"unknown link kind {self.kind!r}")

    @classmethod
    def two_bridge(cls, p: int, q: int) -> "LinkDescriptor":
        """Descriptor of S(p,q)"""
        return cls(TWO_BRIDGE, p=int(p), q=int(q))

    @classmethod
    def montesinos(cls, e: int, pairs: Sequence[Sequence[int]]) -> "LinkDescriptor":
        """Descriptor of M(e; pairs)"""
        return cls(MONTESINOS, e=int(e), pairs=tuple((int(a), int(b)) for a, b in pairs))

    @property
    def is_two_bridge(self) -> bool:
        """Whether this is an S(p,q) descriptor"""
        return self.kind == TWO_BRIDGE

    def __str__(self) -> str:
        if self.is_two_bridge:
            return f"S({self.p},{self.q})"
        return f"M({self.e};" + ",".join(f"{a}/{b}" for a, b in self.pairs) + ")"


_TWO_BRIDGE_RE = re.compile(r"S\((-?\d+),(-?\d+)\)")
_MONTESINOS_RE = re.compile(r"M\((-?\d+);(.*)\)")
_SLASH_PAIRS_RE = re.compile(r"-?\d+/-?\d+(,-?\d+/-?\d+)*")
_PAREN_PAIRS_RE = re.compile(r"\(-?\d+,-?\d+\)(,\(-?\d+,-?\d+\))*")


def parse_descriptor(text: str) -> LinkDescriptor:
    """Parse `S(p,q)` or `M(e;a/b,...)`; pairs may also be spelled `(a,b)`"""
    compact = "".join(str(text).split())
    try:
        match = _TWO_BRIDGE_RE.fullmatch(compact)
        if match:
            return LinkDescriptor.two_bridge(int(match.group(1)), int(match.group(2)))
        match = _MONTESINOS_RE.fullmatch(compact)
        if match:
            body = match.group(2)
            if not body:
                pairs = []
            elif _SLASH_PAIRS_RE.fullmatch(body):
                pairs = [tuple(int(x) for x in item.split("/")) for item in body.split(",")]
            elif _PAREN_PAIRS_RE.fullmatch(body):
                pairs = [(int(a), int(b)) for a, b in re.findall(r"\((-?\d+),(-?\d+)\)", body)]
            else:
                raise DescriptorError(f"cannot read tangles {body!r}")
            return LinkDescriptor.montesinos(int(match.group(1)), pairs)
    except DescriptorError:
        raise
    except ValueError as e:
        raise DescriptorError(str(e)) from e
    raise DescriptorError(f"cannot parse {text!r}")


# --- moves ------------------------------------------------------------------

def _case_of(d: LinkDescriptor) -> int:
    return 1 if all(alpha % 2 for alpha, _ in d.pairs) else 2


def normalize_montesinos(d: LinkDescriptor, mode: Optional[str] = None) -> LinkDescriptor:
    """Bring a Montesinos descriptor into the form its checkerboard surface needs

    case1 (every alpha odd): 0 < beta < alpha.
    case2: beta the least positive odd residue, then e = r (mod 2) by moving one
    even-alpha tangle with the smallest beta/alpha. Without `mode` the case is
    read off the parities of the alphas.
    """
    if d.is_two_bridge:
        d = to_montesinos(d)
    mode = mode or f"case{_case_of(d)}"
    e = d.e
    pairs = []
    if mode == "case1":
        if _case_of(d) != 1:
            raise ValueError(f"{d} has an even alpha; case1 needs every alpha odd")
        for alpha, beta in d.pairs:
            reduced = beta % alpha
            e -= (beta - reduced) // alpha
            pairs.append((alpha, reduced))
        return LinkDescriptor.montesinos(e, pairs)
    if mode != "case2":
        raise ValueError(f"unknown normalization mode {mode!r}")
    for alpha, beta in d.pairs:
        reduced = beta % alpha
        if reduced % 2 == 0:
            reduced += alpha
        e -= (beta - reduced) // alpha
        pairs.append((alpha, reduced))
    if (e - len(pairs)) % 2:
        even = [i for i, (alpha, _) in enumerate(pairs) if alpha % 2 == 0]
        if not even:
            raise ValueError(f"{d}: case2 parity fix needs an even alpha")
        j = min(even, key=lambda i: (Fraction(pairs[i][1], pairs[i][0]), i))
        alpha, beta = pairs[j]
        pairs[j] = (alpha, beta + alpha)
        e += 1
    return LinkDescriptor.montesinos(e, pairs)


def to_montesinos(d: LinkDescriptor) -> LinkDescriptor:
    """S(p,q) = M(0; (q', p)) with q' = q mod p, taken above 1"""
    if not d.is_two_bridge:
        return d
    alpha = d.q % d.p
    if alpha == 1:
        alpha += d.p
    return LinkDescriptor.montesinos(0, [(alpha, d.p)])


def reflect(d: LinkDescriptor) -> LinkDescriptor:
    """Mirror image: S(p, p-q) or M(r-e; (a, a-b), ...)"""
    if d.is_two_bridge:
        return LinkDescriptor.two_bridge(d.p, (d.p - d.q) % d.p)
    return LinkDescriptor.montesinos(len(d.pairs) - d.e, [(a, a - b) for a, b in d.pairs])


def double_cover(d: LinkDescriptor) -> SeifertData:
    """Branched double cover: M(e; pairs) -> Y(-e; pairs), S(p,q) -> L(p,q)"""
    if d.is_two_bridge:
        data = SeifertData(0, to_montesinos(d).pairs)
    else:
        data = SeifertData(-d.e, d.pairs)
    if data.order == 0:
        raise ValueError(f"{d}: not a rational homology sphere")
    return data


def determinant(d: LinkDescriptor) -> int:
    """|H1| of the double branched cover"""
    if d.is_two_bridge:
        return d.p
    return SeifertData(-d.e, d.pairs).order


def cover_homology(d: LinkDescriptor) -> Optional[FinAbGroup]:
    """H1 of the double cover, None when it is infinite"""
    if d.is_two_bridge:
        return FinAbGroup((d.p,))
    data = SeifertData(-d.e, d.pairs)
    if data.order == 0:
        return None
    group, _ = cokernel(plumbing_from_seifert(normalize_seifert(data)).matrix)
    return group


def cover_table(d: LinkDescriptor) -> CorrectionTable:
    """Correction terms of the double branched cover"""
    if d.is_two_bridge:
        return lens_table(d.p, d.q % d.p)
    return correction_table(double_cover(d))


# --- continued fractions ----------------------------------------------------

def parity_expansion(alpha: int, beta: int, odd_numerator: bool) -> List[int]:
    """alpha/beta = [a1, ..., am] with every other term even

    odd_numerator (alpha odd): a1, a3, ... even.
    otherwise (beta odd): a2, a4, ... even.
    """
    if odd_numerator and alpha % 2 == 0:
        raise ValueError(f"{alpha}/{beta}: numerator must be odd")
    if not odd_numerator and beta % 2 == 0:
        raise ValueError(f"{alpha}/{beta}: denominator must be odd")
    terms = []
    num, den = alpha, beta
    while True:
        if odd_numerator:
            lower = 2 * floor(Fraction(num, den) / 2)
            a = min((lower, lower + 2), key=lambda c: (abs(c * den - num), abs(c)))
        else:
            if abs(den) == 1:
                terms.append(num * den)
                return terms
            a = round(Fraction(num, den))
        terms.append(a)
        num, den = den, a * den - num
        odd_numerator = not odd_numerator


def evaluate_fraction(terms: Sequence[int]) -> Fraction:
    """Value of the continued fraction [a1, ..., an]^-"""
    value = Fraction(terms[-1])
    for a in reversed(terms[:-1]):
        value = a - 1 / value
    return value


# --- diagrams ---------------------------------------------------------------

@dataclass(frozen=True)
class Crossing:
    """Slots counterclockwise NE, NW, SW, SE; '/' carries the over strand NE-SW"""

    kind: str
    edges: Tuple[int, int, int, int]


@dataclass
class Diagram:
    crossings: List[Crossing]
    free_loops: int
    preferred: str
    faces: List[Tuple[Tuple[int, int], ...]] = field(default_factory=list)
    face_of: Dict[Tuple[int, int], int] = field(default_factory=dict)
    colours: List[str] = field(default_factory=list)

    @property
    def is_connected(self) -> bool:
        if not self.crossings:
            return self.free_loops == 1
        return self.free_loops == 0 and len(self.faces) == len(self.crossings) + 2

    def faces_of_colour(self, colour: str) -> List[int]:
        return [i for i, c in enumerate(self.colours) if c == colour]


class _TangleBuilder:
    """Union-find over strand labels; a tangle maps NW, NE, SW, SE to labels"""

    def __init__(self):
        self.parent: List[int] = []
        self.crossings: List[Tuple[str, List[int]]] = []

    def label(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def crossing(self, kind: str) -> List[int]:
        labels = [self.label() for _ in range(4)]
        self.crossings.append((kind, labels))
        return labels

    def zero(self) -> Dict[str, int]:
        top, bottom = self.label(), self.label()
        return {"NW": top, "NE": top, "SW": bottom, "SE": bottom}

    def infinity(self) -> Dict[str, int]:
        left, right = self.label(), self.label()
        return {"NW": left, "SW": left, "NE": right, "SE": right}

    def twist_h(self, t: Dict[str, int], k: int) -> Dict[str, int]:
        """k half-twists on the right-hand ends"""
        for _ in range(abs(k)):
            c = self.crossing("/" if k > 0 else "\\")
            self.union(c[1], t["NE"])
            self.union(c[2], t["SE"])
            t = {**t, "NE": c[0], "SE": c[3]}
        return t

    def twist_v(self, t: Dict[str, int], k: int) -> Dict[str, int]:
        """k half-twists on the bottom ends"""
        for _ in range(abs(k)):
            c = self.crossing("/" if k > 0 else "\\")
            self.union(c[1], t["SW"])
            self.union(c[0], t["SE"])
            t = {**t, "SW": c[2], "SE": c[3]}
        return t

    def rational(self, terms: Sequence[int]) -> Dict[str, int]:
        """Tangle of slope beta/alpha for alpha/beta = [a1, ..., am]"""
        m = len(terms)
        t = self.infinity() if m % 2 else self.zero()
        for k in range(m, 0, -1):
            a = terms[k - 1]
            t = self.twist_v(t, a) if k % 2 else self.twist_h(t, -a)
        return t

    def add(self, left: Dict[str, int], right: Dict[str, int]) -> Dict[str, int]:
        self.union(left["NE"], right["NW"])
        self.union(left["SE"], right["SW"])
        return {"NW": left["NW"], "SW": left["SW"], "NE": right["NE"], "SE": right["SE"]}

    def close(self, t: Dict[str, int]):
        self.union(t["NW"], t["NE"])
        self.union(t["SW"], t["SE"])

    def finish(self, preferred: str) -> Diagram:
        crossings = [Crossing(kind, tuple(self.find(x) for x in labels)) for kind, labels in self.crossings]
        used = {x for c in crossings for x in c.edges}
        loops = len({self.find(x) for x in range(len(self.parent))} - used)
        diagram = Diagram(crossings, loops, preferred)
        _trace_faces(diagram)
        return diagram


def _edge_ends(diagram: Diagram) -> Dict[int, List[Tuple[int, int]]]:
    ends: Dict[int, List[Tuple[int, int]]] = {}
    for ci, c in enumerate(diagram.crossings):
        for slot, edge in enumerate(c.edges):
            ends.setdefault(edge, []).append((ci, slot))
    for edge, where in ends.items():
        if len(where) != 2:
            raise ValueError(f"edge {edge} has {len(where)} ends")
    return ends


def _trace_faces(diagram: Diagram):
    """Corner k of a crossing sits between slots k and k+1; even corners are white"""
    ends = _edge_ends(diagram)
    for ci in range(len(diagram.crossings)):
        for k in range(4):
            if (ci, k) in diagram.face_of:
                continue
            index = len(diagram.faces)
            colour = "white" if k % 2 == 0 else "black"
            corners = []
            corner = (ci, k)
            while corner not in diagram.face_of:
                if (corner[1] % 2 == 0) != (colour == "white"):
                    raise ValueError("diagram is not checkerboard colourable")
                diagram.face_of[corner] = index
                corners.append(corner)
                c, j = corner
                slot = (j + 1) % 4
                edge = diagram.crossings[c].edges[slot]
                corner = next(end for end in ends[edge] if end != (c, slot))
            diagram.faces.append(tuple(corners))
            diagram.colours.append(colour)


def closure_diagram(e: int, expansions: Sequence[Sequence[int]], preferred: str = "white") -> Diagram:
    """Numerator closure of the e-twist band followed by the rational tangles"""
    builder = _TangleBuilder()
    t = builder.twist_h(builder.zero(), -e)
    for terms in expansions:
        t = builder.add(t, builder.rational(terms))
    builder.close(t)
    return builder.finish(preferred)


def build_diagram(d: LinkDescriptor) -> Diagram:
    """Alternating diagram of the link with its checkerboard colouring"""
    normal = normalize_montesinos(d)
    case = _case_of(normal)
    expansions = [parity_expansion(alpha, beta, odd_numerator=(case == 1)) for alpha, beta in normal.pairs]
    diagram = closure_diagram(normal.e, expansions, "white" if case == 1 else "black")
    logger.debug(f"{d}: case {case} as {normal}, {len(diagram.crossings)} crossings")
    return diagram


def component_count(diagram: Diagram) -> int:
    """Strand cycles: straight through every crossing, plus free loops"""
    parent = {x: x for c in diagram.crossings for x in c.edges}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in diagram.crossings:
        for a, b in ((c.edges[0], c.edges[2]), (c.edges[1], c.edges[3])):
            parent[find(a)] = find(b)
    return len({find(x) for x in parent}) + diagram.free_loops


# --- checkerboard surfaces --------------------------------------------------

def _corners_of(colour: str) -> Tuple[int, int]:
    return (0, 2) if colour == "white" else (1, 3)


def _tait_orientation(diagram: Diagram, colour: str) -> Optional[Dict[int, int]]:
    """Two-colouring of the faces of `colour` across crossings, None if not bipartite"""
    adjacent: Dict[int, List[int]] = {f: [] for f in diagram.faces_of_colour(colour)}
    for ci in range(len(diagram.crossings)):
        k, l = _corners_of(colour)
        r, s = diagram.face_of[(ci, k)], diagram.face_of[(ci, l)]
        if r == s:
            return None
        adjacent[r].append(s)
        adjacent[s].append(r)
    sign: Dict[int, int] = {}
    for start in adjacent:
        if start in sign:
            continue
        sign[start] = 1
        stack = [start]
        while stack:
            f = stack.pop()
            for g in adjacent[f]:
                if g not in sign:
                    sign[g] = -sign[f]
                    stack.append(g)
                elif sign[g] == sign[f]:
                    return None
    return sign


def _orientable_colour(diagram: Diagram) -> Tuple[str, Dict[int, int]]:
    other = "black" if diagram.preferred == "white" else "white"
    for colour in (diagram.preferred, other):
        orientation = _tait_orientation(diagram, colour)
        if orientation is not None:
            if colour != diagram.preferred:
                logger.info(f"falling back to the {colour} surface")
            return colour, orientation
    raise ValueError("no orientable checkerboard surface")


def _crossing_signs(diagram: Diagram, colour: str) -> List[int]:
    """+1 or -1 per crossing relative to the faces of `colour`"""
    return [1 if (c.kind == "/") == (colour == "white") else -1 for c in diagram.crossings]


def _require_connected(diagram: Diagram):
    if not diagram.is_connected:
        raise ValueError("split diagram: signature undefined")


@dataclass(frozen=True)
class SeifertMatrix:
    rows: Tuple[Tuple[int, ...], ...]

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "SeifertMatrix":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @property
    def a(self) -> int:
        return len(self.rows)

    def symmetrized(self) -> IntSymMatrix:
        return IntSymMatrix.from_rows([[self.rows[i][j] + self.rows[j][i] for j in range(self.a)]
                                       for i in range(self.a)])

    def determinant(self) -> int:
        return abs(self.symmetrized().det())

    def signature(self) -> int:
        return form_signature(self.symmetrized().rows())

    def to_numpy(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(self.a, self.a)


def surface_seifert_matrix(diagram: Diagram) -> SeifertMatrix:
    """Seifert matrix (G + J) / 2 of the orientable checkerboard surface

    G is the Goeritz matrix on the faces of the other colour, J records which
    side of each crossing band the surface orientation points to.
    """
    _require_connected(diagram)
    if not diagram.crossings:
        return SeifertMatrix(())
    colour, orientation = _orientable_colour(diagram)
    eta = _crossing_signs(diagram, colour)
    other = "black" if colour == "white" else "white"
    regions = diagram.faces_of_colour(other)
    index = {f: i for i, f in enumerate(regions)}
    n = len(regions)
    g = [[0] * n for _ in range(n)]
    j = [[0] * n for _ in range(n)]
    for ci in range(len(diagram.crossings)):
        for k in _corners_of(other):
            r = index[diagram.face_of[(ci, k)]]
            s = index[diagram.face_of[(ci, (k + 2) % 4)]]
            if r == s:
                continue
            g[r][s] -= eta[ci]
            j[r][s] -= orientation[diagram.face_of[(ci, (k + 1) % 4)]]
    for r in range(n):
        g[r][r] = -sum(g[r][s] for s in range(n) if s != r)
    rows = []
    for r in range(1, n):
        row = []
        for s in range(1, n):
            total = g[r][s] + j[r][s]
            if total % 2:
                raise ValueError("checkerboard surface is not orientable")
            row.append(total // 2)
        rows.append(row)
    return SeifertMatrix.of(rows)


def goeritz_signature(diagram: Diagram) -> int:
    """Signature from the non-orientable surface: sig(G) plus the crossing correction"""
    _require_connected(diagram)
    if not diagram.crossings:
        return 0
    colour, _ = _orientable_colour(diagram)
    eta = _crossing_signs(diagram, colour)
    regions = diagram.faces_of_colour(colour)
    index = {f: i for i, f in enumerate(regions)}
    n = len(regions)
    g = [[0] * n for _ in range(n)]
    for ci in range(len(diagram.crossings)):
        for k in _corners_of(colour):
            r = index[diagram.face_of[(ci, k)]]
            s = index[diagram.face_of[(ci, (k + 2) % 4)]]
            if r != s:
                g[r][s] += eta[ci]
    for r in range(n):
        g[r][r] = -sum(g[r][s] for s in range(n) if s != r)
    reduced = [row[1:] for row in g[1:]]
    return form_signature(reduced) + sum(eta)


def seifert_matrix(d: LinkDescriptor) -> SeifertMatrix:
    """Seifert matrix; two-bridge knots use the genus-minimal band plumbing"""
    if d.is_two_bridge and d.p % 2:
        return SeifertMatrix.of(twobridge.seifert_matrix(d.p, d.q))
    return surface_seifert_matrix(build_diagram(d))


def signature(d: LinkDescriptor, cross_check: bool = True) -> int:
    """Signature of the link, from the two-bridge formula for knots and a Seifert surface otherwise"""
    if d.is_two_bridge and d.p % 2:
        return twobridge.signature(d.p, d.q)
    diagram = build_diagram(d)
    sigma = surface_seifert_matrix(diagram).signature()
    if cross_check:
        other = goeritz_signature(diagram)
        if other != sigma:
            raise RuntimeError(f"{d}: Seifert signature {sigma} != Goeritz signature {other}")
    return sigma


# --- Tristram-Levine --------------------------------------------------------

def _angle(angle) -> Fraction:
    angle = Fraction(angle) % 1
    if angle == 0:
        raise ValueError("omega = 1 is excluded")
    if angle.denominator > MAX_ORDER:
        raise ValueError(f"root of unity of order {angle.denominator} exceeds {MAX_ORDER}")
    return angle


def tristram_levine_matrix(matrix: SeifertMatrix, angle) -> List[List[CyclotomicNumber]]:
    """(1 - w) M + (1 - conj w) M^T for w = exp(2 pi i angle)"""
    angle = _angle(angle)
    n = angle.denominator
    omega = CyclotomicNumber.root(n, angle.numerator)
    left = 1 - omega
    right = 1 - omega.conjugate()
    rows = matrix.rows
    return [[left * rows[i][j] + right * rows[j][i] for j in range(matrix.a)] for i in range(matrix.a)]


def tristram_levine_of(matrix: SeifertMatrix, angle) -> int:
    """Tristram-Levine signature of a Seifert matrix at angle"""
    pos, neg, _ = inertia(tristram_levine_matrix(matrix, angle), sign=real_sign)
    return pos - neg


def tristram_levine(d: LinkDescriptor, angle) -> int:
    """sigma_w for w = exp(2 pi i angle), angle a rational k/n with n <= 24"""
    return tristram_levine_of(seifert_matrix(d), angle)


def sampled_angles(max_order: int) -> List[Fraction]:
    """Angles k/n in (0, 1/2] with n <= max_order"""
    angles = {Fraction(k, n) for n in range(2, max_order + 1) for k in range(1, n // 2 + 1) if gcd(k, n) == 1}
    return sorted(angles)


# --- Taylor bracket ---------------------------------------------------------

class TaylorBracket(NamedTuple):
    lo: int
    hi: int

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def __str__(self) -> str:
        return str(self.lo) if self.exact else f"[{self.lo},{self.hi}]"


def _box(a: int, radius: int) -> np.ndarray:
    side = 2 * radius + 1
    return np.indices((side,) * a, dtype=np.int64).reshape(a, -1).T - radius


def _box_radius(a: int, bound: int) -> int:
    radius = bound
    while radius > 0 and (2 * radius + 1) ** a > BOX_LIMIT:
        radius -= 1
    if radius < bound:
        logger.debug(f"Taylor pool radius reduced to {radius} in rank {a}")
    return radius


def isotropic_pool(matrix: SeifertMatrix, bound: int) -> np.ndarray:
    """Primitive x with x M x^T = 0 from a coefficient box and its image under (M + M^T)^-1"""
    a = matrix.a
    m = matrix.to_numpy()
    g = matrix.symmetrized()
    radius = _box_radius(a, bound)
    box = _box(a, radius)
    det = g.det()
    adjugate = np.array(g.adjugate(), dtype=np.int64)
    dual = box @ adjugate.T
    dual = dual[np.all(dual % det == 0, axis=1)] // det
    pool = np.vstack([box, dual])
    pool = pool[np.einsum("ij,jk,ik->i", pool, m, pool) == 0]
    pool = pool[np.gcd.reduce(np.abs(pool), axis=1) == 1]
    lead = pool[np.arange(len(pool)), np.argmax(pool != 0, axis=1)]
    pool = np.unique(pool * np.sign(lead)[:, None], axis=0)
    order = np.lexsort((np.abs(pool).max(axis=1), np.abs(pool).sum(axis=1)))
    return pool[order][:POOL_LIMIT]


def null_rank(matrix: SeifertMatrix, bound: int, target: int) -> int:
    """Largest rank of a sublattice spanned by pool vectors on which M vanishes"""
    pool = isotropic_pool(matrix, bound)
    if target <= 0 or not len(pool):
        return 0
    pairing = pool @ matrix.to_numpy() @ pool.T
    compatible = (pairing == 0) & (pairing.T == 0)
    best = 0
    nodes = 0

    def extend(chosen: List[int], allowed: np.ndarray, rank: int):
        nonlocal best, nodes
        best = max(best, rank)
        for j in np.flatnonzero(allowed):
            if best >= target or nodes >= NODE_LIMIT:
                return
            nodes += 1
            rows = chosen + [int(j)]
            new_rank = Matrix(pool[rows].tolist()).rank()
            if new_rank == rank:
                continue
            following = allowed & compatible[j]
            following[: j + 1] = False
            extend(rows, following, new_rank)

    extend([], np.ones(len(pool), dtype=bool), 0)
    if nodes >= NODE_LIMIT:
        logger.warning(f"null sublattice search stopped after {nodes} nodes at rank {best}")
    return best


def taylor_bracket(matrix: SeifertMatrix, bound: int = 2, max_order: int = 12) -> TaylorBracket:
    """lo from Tristram-Levine signatures, hi from null sublattices found in the search box"""
    if matrix.a == 0:
        return TaylorBracket(0, 0)
    square = Matrix([list(row) for row in matrix.rows])
    skew = square - square.T
    if abs(skew.det()) != 1:
        raise ValueError("Taylor bracket needs a knot")
    if not 2 <= max_order <= MAX_ORDER:
        raise ValueError(f"max_order must lie in [2, {MAX_ORDER}]")
    half = matrix.a // 2
    largest = max(abs(tristram_levine_of(matrix, angle)) for angle in sampled_angles(max_order))
    lo = ceil(Fraction(largest, 2))
    hi = half - null_rank(matrix, bound, half - lo)
    logger.debug(f"Taylor bracket [{lo}, {hi}] for a = {matrix.a}")
    return TaylorBracket(lo, hi)


# --- invariants and genus ---------------------------------------------------

@dataclass
class LinkInvariants:
    descriptor: LinkDescriptor
    mu: int
    sigma: int
    h: int
    h1: Optional[FinAbGroup]
    taylor: Optional[TaylorBracket] = None

    @property
    def is_knot(self) -> bool:
        return self.mu == 1


def link_invariants(d: LinkDescriptor, taylor_bound: Optional[int] = None,
                    max_order: int = 12) -> LinkInvariants:
    """mu, sigma, h and H1 of the cover; the Taylor bracket for knots when a bound is given"""
    if d.is_two_bridge and d.p % 2:
        mu = 1
        sigma = twobridge.signature(d.p, d.q)
    else:
        mu = component_count(build_diagram(d))
        sigma = signature(d)
    h1 = cover_homology(d)
    h = h1.order if h1 is not None else 0
    inv = LinkInvariants(d, mu, sigma, h, h1)
    if taylor_bound is not None and mu == 1:
        inv.taylor = taylor_bracket(seifert_matrix(d), taylor_bound, max_order)
    return inv


def format_rational(x: Fraction) -> str:
    """Integer or p/q text for a rational"""
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class GenusReport:
    invariants: LinkInvariants
    murasugi_bound: Fraction
    b: int
    orientation: str
    report: ObstructionReport

    @property
    def obstructed(self) -> bool:
        return self.report.obstructed

    @property
    def conclusion(self) -> str:
        if self.obstructed:
            return f"g* > {format_rational(self.murasugi_bound)}"
        return "inconclusive"


def genus_obstruction(d: LinkDescriptor, orbit_reduction: bool = True,
                      invariants: Optional[LinkInvariants] = None) -> GenusReport:
    """Rule out a definite filling with b2 = |sigma|; success beats the Murasugi bound

    Knots of signature 0 go to the rational ball test, where success means g* > 0.
    """
    inv = invariants or link_invariants(d)
    if inv.h == 0:
        raise ValueError(f"{d}: not a rational homology sphere")
    if inv.sigma == 0:
        if inv.mu != 1:
            raise ValueError(f"{d} has signature 0 and {inv.mu} components")
        logger.info(f"{d}: sigma=0, checking for a rational ball")
        return GenusReport(inv, Fraction(0), 0, "Y", check_rational_ball(cover_table(d)))
    b = abs(inv.sigma)
    table = cover_table(d)
    if inv.sigma > 0:
        table, orientation = table.reversed(), "-Y"
    else:
        orientation = "Y"
    logger.info(f"{d}: sigma={inv.sigma}, mu={inv.mu}, checking {orientation} with b={b}")
    report = check_bound(table, b, orbit_reduction)
    return GenusReport(inv, Fraction(b - inv.mu + 1, 2), b, orientation, report)


def slice_check(d: LinkDescriptor) -> ObstructionReport:
    """Whether the double cover can bound a rational ball; obstructed means not slice"""
    mu = twobridge.component_count(d.p) if d.is_two_bridge else component_count(build_diagram(d))
    if mu != 1:
        raise ValueError(f"{d} is not a knot")
    return check_rational_ball(cover_table(d))


def two_bridge_representative(p: int, q: int) -> int:
    """Smaller of q and q^-1 mod p: the class of S(p,q) up to equivalence"""
    q %= p
    return min(q, pow(q, -1, p))


def reduced_pairs(alpha_max: int) -> List[Tuple[int, int]]:
    """Reduced pairs (alpha, beta) with 0 < beta < alpha <= alpha_max"""
    return [(a, b) for a in range(2, alpha_max + 1) for b in range(1, a) if gcd(a, b) == 1]


def montesinos_range(emin: int, emax: int, alpha_max: int, r: int = 3) -> List[LinkDescriptor]:
    """Descriptors with r tangles, pairs sorted so permutations appear once"""
    pairs = reduced_pairs(alpha_max)
    return [LinkDescriptor.montesinos(e, combo)
            for e in range(emin, emax + 1)
            for combo in itertools.combinations_with_replacement(pairs, r)]
