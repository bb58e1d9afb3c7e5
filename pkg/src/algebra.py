"""
Algebra - Exact integer matrices, Smith normal form and finite abelian groups
Backs every lattice and group computation with arbitrary-precision integers
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, List, Sequence, Tuple

from sympy import Matrix, QQ, ZZ, factorint, multiplicity
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

# All rational quantities (d, sq, e + sum b/a) are plain Fractions.
ExactRational = Fraction


@dataclass(frozen=True)
class IntSymMatrix:
    """Symmetric integer matrix; the rank-0 matrix is the empty form with det 1"""

    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        for i, row in enumerate(self.entries):
            if len(row) != n:
                raise ValueError("matrix must be square")
            for j in range(i):
                if row[j] != self.entries[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i}, {j})")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "IntSymMatrix":
        """Form from a square symmetric array of integers"""
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntSymMatrix":
        """Diagonal form with the given entries"""
        n = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i][j]

    def rows(self) -> List[List[int]]:
        return [list(row) for row in self.entries]

    def diag(self) -> Tuple[int, ...]:
        return tuple(self.entries[i][i] for i in range(self.n))

    def to_sympy(self) -> Matrix:
        return Matrix(self.rows()) if self.n else Matrix.zeros(0, 0)

    def to_domain(self) -> DomainMatrix:
        """Integer DomainMatrix for exact linear algebra"""
        return DomainMatrix.from_Matrix(self.to_sympy()).convert_to(ZZ)

    def det(self) -> int:
        """Determinant; 1 for the empty form"""
        if self.n == 0:
            return 1
        return int(self.to_domain().det())

    def adjugate(self) -> List[List[int]]:
        """Classical adjoint, so that adj(Q) Q = det(Q) I"""
        if self.n == 0:
            return []
        if self.n == 1:
            return [[1]]
        dm = self.to_domain()
        det = dm.det()
        if det == 0:
            adj = self.to_sympy().adjugate()
            return [[int(adj[i, j]) for j in range(self.n)] for i in range(self.n)]
        inverse = dm.convert_to(QQ).inv().to_Matrix()
        return [[int(inverse[i, j] * int(det)) for j in range(self.n)] for i in range(self.n)]

    def congruent(self, basis: Sequence[Sequence[int]]) -> "IntSymMatrix":
        """Gram matrix of the given basis vectors (rows) under this form"""
        b = Matrix([list(v) for v in basis])
        return IntSymMatrix.from_rows((b * self.to_sympy() * b.T).tolist())

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries) + "]"


@dataclass(frozen=True)
class FinAbGroup:
    """Finite abelian group Z/d1 + ... + Z/dk in invariant-factor form"""

    invariant_factors: Tuple[int, ...] = ()

    def __post_init__(self):
        factors = self.invariant_factors
        for i, d in enumerate(factors):
            if d < 2:
                raise ValueError(f"invariant factors must be >= 2, got {factors}")
            if i and d % factors[i - 1]:
                raise ValueError(f"invariant factors must form a divisibility chain, got {factors}")

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        result = 1
        for d in self.invariant_factors:
            result *= d
        return result

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def element(self, coords: Iterable[int]) -> "GroupElement":
        """Element with the given coordinates reduced mod the invariant factors"""
        coords = tuple(coords)
        return GroupElement(self, tuple(c % d for c, d in zip(coords, self.invariant_factors)))

    def generators(self) -> List["GroupElement"]:
        """Unit vectors of the invariant factor decomposition"""
        return [self.element(1 if j == i else 0 for j in range(self.rank)) for i in range(self.rank)]

    def elements(self) -> Iterator["GroupElement"]:
        """Every element, in lexicographic order of coordinates"""
        for coords in itertools.product(*(range(d) for d in self.invariant_factors)):
            yield GroupElement(self, coords)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return "+".join(f"Z/{d}" for d in self.invariant_factors)


@dataclass(frozen=True)
class GroupElement:
    group: FinAbGroup
    coords: Tuple[int, ...]

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.group, tuple(
            (a + b) % d for a, b, d in zip(self.coords, other.coords, self.group.invariant_factors)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(
            (-a) % d for a, d in zip(self.coords, self.group.invariant_factors)))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __mul__(self, k: int) -> "GroupElement":
        return GroupElement(self.group, tuple(
            (k * a) % d for a, d in zip(self.coords, self.group.invariant_factors)))

    __rmul__ = __mul__

    def __lt__(self, other: "GroupElement") -> bool:
        return self.coords < other.coords

    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        """Additive order of the element"""
        k = 1
        for a, d in zip(self.coords, self.group.invariant_factors):
            if a:
                part = d // math.gcd(a, d)
                k = k * part // math.gcd(k, part)
        return k

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by the images of the source generators"""

    source: FinAbGroup
    target: FinAbGroup
    images: Tuple[GroupElement, ...]

    def __post_init__(self):
        for img, d in zip(self.images, self.source.invariant_factors):
            if (img * d).coords != self.target.zero().coords:
                raise ValueError(f"image {img} does not respect the relation of order {d}")

    def __call__(self, x: GroupElement) -> GroupElement:
        result = self.target.zero()
        for c, img in zip(x.coords, self.images):
            if c:
                result = result + img * c
        return result

    def kernel(self) -> List[GroupElement]:
        """Elements mapped to zero"""
        return [x for x in self.source.elements() if self(x).is_zero()]

    def is_injective(self) -> bool:
        """Whether the kernel is trivial"""
        return len(span(self.target, self.images)) == self.source.order


def smith_normal_form(m: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U*M*V = D diagonal, d1 | d2 | ..., U and V unimodular"""
    matr = Matrix([list(row) for row in m])
    rows, cols = matr.shape
    left, right = Matrix.eye(rows), Matrix.eye(cols)

    for s in range(min(rows, cols)):
        while True:
            pos = _least_nonzero(matr, s)
            if pos is None:
                return left, matr, right
            i, j = pos
            if i != s:
                matr.row_swap(s, i)
                left.row_swap(s, i)
            if j != s:
                matr.col_swap(s, j)
                right.col_swap(s, j)

            pivot = matr[s, s]
            for i in range(s + 1, rows):
                q = matr[i, s] // pivot
                if q:
                    matr.row_op(i, lambda val, col: val - q * matr[s, col])
                    left.row_op(i, lambda val, col: val - q * left[s, col])
            for j in range(s + 1, cols):
                q = matr[s, j] // pivot
                if q:
                    matr.col_op(j, lambda val, row: val - q * matr[row, s])
                    right.col_op(j, lambda val, row: val - q * right[row, s])

            if any(matr[i, s] for i in range(s + 1, rows)) or any(matr[s, j] for j in range(s + 1, cols)):
                continue

            # pivot must divide the remaining block
            bad = next(((i, j) for i in range(s + 1, rows) for j in range(s + 1, cols)
                        if matr[i, j] % pivot), None)
            if bad is None:
                break
            r = bad[0]
            matr.row_op(s, lambda val, col: val + matr[r, col])
            left.row_op(s, lambda val, col: val + left[r, col])

        if matr[s, s] < 0:
            matr.row_op(s, lambda val, col: -val)
            left.row_op(s, lambda val, col: -val)

    return left, matr, right


def _least_nonzero(matr: Matrix, s: int):
    rows, cols = matr.shape
    best, best_abs = None, 0
    for i in range(s, rows):
        for j in range(s, cols):
            v = abs(matr[i, j])
            if v and (best is None or v < best_abs):
                best, best_abs = (i, j), v
    return best


class LatticeProjection:
    """Surjection Z^n -> Z^n / Q Z^n read off a Smith transform"""

    def __init__(self, group: FinAbGroup, rows: List[List[int]]):
        self.group = group
        self.rows = rows

    def __call__(self, x: Sequence[int]) -> GroupElement:
        return self.group.element(sum(r * v for r, v in zip(row, x)) for row in self.rows)

    def lifts(self, n: int) -> Dict[GroupElement, Tuple[int, ...]]:
        """A vector of Z^n over every element, found breadth first along the unit vectors"""
        units = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        images = [self(u) for u in units]
        zero = self.group.zero()
        found = {zero: (0,) * n}
        frontier = [zero]
        while frontier:
            reached = []
            for x in frontier:
                for u, image in zip(units, images):
                    y = x + image
                    if y not in found:
                        found[y] = tuple(a + b for a, b in zip(found[x], u))
                        reached.append(y)
            frontier = reached
        if len(found) != self.group.order:
            raise ValueError(f"unit vectors reach {len(found)} of {self.group.order} elements")
        return found


def cokernel(q: IntSymMatrix) -> Tuple[FinAbGroup, LatticeProjection]:
    """Discriminant group of Q together with the projection from Z^n"""
    if q.n == 0:
        return FinAbGroup(), LatticeProjection(FinAbGroup(), [])
    if q.det() == 0:
        raise ValueError("degenerate form")
    u, d, _ = smith_normal_form(q.rows())
    factors, rows = [], []
    for i in range(q.n):
        if d[i, i] != 1:
            factors.append(int(d[i, i]))
            rows.append([int(u[i, j]) for j in range(q.n)])
    group = FinAbGroup(tuple(factors))
    return group, LatticeProjection(group, rows)


def span(group: FinAbGroup, generators: Iterable[GroupElement]) -> frozenset:
    """Subgroup generated by the given elements"""
    elements = {group.zero()}
    for g in generators:
        if g in elements:
            continue
        multiples = [g * m for m in range(g.order())]
        elements = {x + y for x in elements for y in multiples}
    return frozenset(elements)


def subgroups_of_order(group: FinAbGroup, k: int) -> List[Tuple[GroupElement, ...]]:
    """All subgroups of order k, each as a sorted tuple of elements"""
    if k < 1 or group.order % k:
        return []
    if k == 1:
        return [(group.zero(),)]
    candidates = [x for x in group.elements() if not x.is_zero() and k % x.order() == 0]
    found = set()
    for size in range(1, max(group.rank, 1) + 1):
        for gens in itertools.combinations(candidates, size):
            sub = span(group, gens)
            if len(sub) == k:
                found.add(sub)
    return sorted((tuple(sorted(sub)) for sub in found), key=lambda s: [x.coords for x in s])


def homomorphisms(source: FinAbGroup, target: FinAbGroup, injective_only: bool = False) -> List[GroupHom]:
    """All homomorphisms source -> target, optionally only the injective ones"""
    if injective_only and target.order % source.order:
        return []
    choices = []
    for d in source.invariant_factors:
        choices.append([y for y in target.elements() if d % y.order() == 0])
    maps = []
    for images in itertools.product(*choices):
        hom = GroupHom(source, target, tuple(images))
        if injective_only and not hom.is_injective():
            continue
        maps.append(hom)
    return maps


def two_torsion(group: FinAbGroup) -> List[GroupElement]:
    """Elements x with 2x = 0, the zero element first"""
    options = [(0, d // 2) if d % 2 == 0 else (0,) for d in group.invariant_factors]
    return [GroupElement(group, coords) for coords in itertools.product(*options)]


def is_negative_definite(q: IntSymMatrix) -> bool:
    """Whether every eigenvalue of Q is negative, decided by exact inertia"""
    if q.n == 0:
        return True
    return inertia([[Fraction(x) for x in row] for row in q.entries]) == (0, q.n, 0)


def invariant_cosets(group: FinAbGroup, subgroup: Sequence[GroupElement]) -> List[GroupElement]:
    """One element per coset x + T with 2x in T, the zero element first

    These are the cosets fixed by x -> -x, so a table shifted by any of them
    stays compatible with conjugation on H/T.
    """
    members = frozenset(subgroup)
    seen = set()
    reps = []
    for x in sorted(group.elements()):
        if x * 2 not in members:
            continue
        coset = frozenset(x + t for t in members)
        if coset in seen:
            continue
        seen.add(coset)
        reps.append(x)
    return reps


class Quotient:
    """H/T with projection from H and a fixed lift of every class"""

    def __init__(self, parent: FinAbGroup, subgroup: Sequence[GroupElement],
                 group: FinAbGroup, rows: Sequence[Sequence[int]]):
        self.parent = parent
        self.subgroup = tuple(subgroup)
        self.group = group
        self.rows = tuple(tuple(r) for r in rows)
        self.lifts: Dict[GroupElement, GroupElement] = {}
        for x in parent.elements():
            self.lifts.setdefault(self.project(x), x)

    def project(self, x: GroupElement) -> GroupElement:
        """Image of x in the quotient"""
        return self.group.element(sum(r * c for r, c in zip(row, x.coords)) for row in self.rows)

    def lift(self, y: GroupElement) -> GroupElement:
        """A fixed preimage of y in the group"""
        return self.lifts[y]


def quotient(group: FinAbGroup, subgroup: Sequence[GroupElement]) -> Quotient:
    """Quotient group H/T computed from the Smith form of the relation matrix"""
    k = group.rank
    if k == 0:
        trivial = FinAbGroup()
        return Quotient(group, subgroup, trivial, ())
    relations = [[group.invariant_factors[i] if i == j else 0 for j in range(k)] for i in range(k)]
    for i in range(k):
        relations[i].extend(t.coords[i] for t in subgroup if not t.is_zero())
    u, d, _ = smith_normal_form(relations)
    factors, rows = [], []
    for i in range(k):
        if d[i, i] != 1:
            factors.append(int(d[i, i]))
            rows.append(tuple(int(u[i, j]) for j in range(k)))
    target = FinAbGroup(tuple(factors))
    if target.order * len(subgroup) != group.order:
        raise ValueError(f"quotient of {group} by a subgroup of order {len(subgroup)} has order {target.order}")

    return Quotient(group, subgroup, target, rows)


def embeds_in(small: FinAbGroup, big: FinAbGroup) -> bool:
    """Whether `small` is isomorphic to a subgroup of `big`"""
    if big.order % small.order:
        return False
    for p in factorint(small.order):
        a = sorted((multiplicity(p, d) for d in small.invariant_factors), reverse=True)
        b = sorted((multiplicity(p, d) for d in big.invariant_factors), reverse=True)
        a = [e for e in a if e]
        if len(a) > len(b) or any(x > y for x, y in zip(a, b)):
            return False
    return True


def _rational_sign(x) -> int:
    return (x > 0) - (x < 0)


def inertia(matrix: Sequence[Sequence], sign: Callable = _rational_sign) -> Tuple[int, int, int]:
    """(positive, negative, zero) counts of a Hermitian matrix by exact congruence

    Entries must support field arithmetic, `conjugate()` and comparison with 0;
    `sign` evaluates the sign of a real entry.
    """
    a = [list(row) for row in matrix]
    pos = neg = zero = 0
    while a:
        n = len(a)
        p = next((i for i in range(n) if a[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in range(n) for j in range(n) if a[i][j] != 0), None)
            if pair is None:
                zero += n
                break
            i, j = pair
            lam = a[i][j].conjugate()
            for r in range(n):
                a[r][i] = a[r][i] + a[r][j] * lam
            for c in range(n):
                a[i][c] = a[i][c] + lam.conjugate() * a[j][c]
            p = i
        pivot = a[p][p]
        s = sign(pivot)
        if s > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in range(n) if i != p]
        a = [[a[r][c] - a[r][p] * a[p][c] / pivot for c in rest] for r in rest]
    return pos, neg, zero


def signature(matrix: Sequence[Sequence]) -> int:
    """Signature of a symmetric rational matrix"""
    pos, neg, _ = inertia([[Fraction(x) for x in row] for row in matrix])
    return pos - neg
