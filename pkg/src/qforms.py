"""
Quadratic Forms - Negative definite integer forms and their maximal squares
Enumerates forms of given rank and determinant, tests integral equivalence and
tabulates sq on the discriminant group
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from algebra import (FinAbGroup, GroupElement, IntSymMatrix, LatticeProjection,
                     cokernel, is_negative_definite, two_torsion)

logger = logging.getLogger(__name__)

MAX_RANK = 4

# Minkowski-reduced forms satisfy p11*...*pnn <= LAMBDA[n] * det
MINKOWSKI_LAMBDA = {1: Fraction(1), 2: Fraction(4, 3), 3: Fraction(2), 4: Fraction(4)}
# n-th power of the Hermite constant
HERMITE_POWER = {1: Fraction(1), 2: Fraction(4, 3), 3: Fraction(2), 4: Fraction(4)}

# int64 headroom for c * adj * c
_INT64_SAFE = 2 ** 62

# forest-shaped forms with more hypercube covectors than this use the tree program
HYPERCUBE_LIMIT = 1 << 16
SQ_METHODS = ("auto", "hypercube", "forest")


@dataclass(frozen=True)
class QuadraticForm:
    """Negative definite integer form"""

    matrix: IntSymMatrix

    def __post_init__(self):
        if not is_negative_definite(self.matrix):
            raise ValueError(f"form {self.matrix} is not negative definite")

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "QuadraticForm":
        return cls(IntSymMatrix.from_rows(rows))

    @property
    def rank(self) -> int:
        return self.matrix.n

    @property
    def det_abs(self) -> int:
        return abs(self.matrix.det())

    def __str__(self) -> str:
        return str(self.matrix)


@dataclass
class SqTable:
    """Maximal square of a characteristic covector in every discriminant class

    Labels are (c - origin)/2 projected to the cokernel; the origin covector lies
    in the image of Q, so conjugation acts on labels as negation.
    """

    form: QuadraticForm
    group: FinAbGroup
    sq: Dict[GroupElement, Fraction]
    jfixed: FrozenSet[GroupElement]
    class_reps: Dict[GroupElement, Tuple[int, ...]]
    origin: Tuple[int, ...]
    projection: LatticeProjection

    def classify(self, covector: Sequence[int]) -> GroupElement:
        """Class of a characteristic covector"""
        return self.projection([(c - o) // 2 for c, o in zip(covector, self.origin)])

    def values(self) -> List[Fraction]:
        return sorted(self.sq.values())


class OmegaPoint(NamedTuple):
    covector: Tuple[int, int]
    label: GroupElement
    square: Fraction
    jfixed: bool


def enumerate_rank2_reduced(r: int) -> List[QuadraticForm]:
    """All [[a,b],[b,c]] with 0 >= 2b >= a >= c and ac - b^2 = r"""
    if r < 1:
        raise ValueError("determinant must be positive")
    forms = []
    a = -1
    while 3 * a * a <= 4 * r:
        for b in range(0, -((-a) // 2) - 1, -1):
            if 2 * b < a:
                break
            num = r + b * b
            if num % a == 0:
                c = num // a
                if c <= a:
                    forms.append(QuadraticForm.of([[a, b], [b, c]]))
        a -= 1
    return forms


def _ldl_extend(pivots: List[Fraction], lower: List[List[Fraction]],
                column: Sequence[int]) -> Tuple[List[Fraction], Fraction]:
    """Row of L and the Schur remainder w for a new column of a positive form"""
    k = len(pivots)
    row = []
    for j in range(k):
        acc = Fraction(column[j]) - sum((row[i] * lower[j][i] * pivots[i] for i in range(j)), Fraction(0))
        row.append(acc / pivots[j])
    w = sum((row[j] * row[j] * pivots[j] for j in range(k)), Fraction(0))
    return row, w


def _hermite_candidates(rank: int, det_abs: int) -> List[List[List[int]]]:
    """Positive forms P = -Q in Minkowski-style reduced shape with det P = det_abs"""
    bound = MINKOWSKI_LAMBDA[rank] * det_abs
    p11_max = 1
    while Fraction((p11_max + 1) ** rank) <= HERMITE_POWER[rank] * det_abs:
        p11_max += 1
    results = []

    def extend(rows: List[List[int]], pivots: List[Fraction], lower: List[List[Fraction]], prod: int):
        k = len(rows)
        diag = [rows[i][i] for i in range(k)]
        ranges = []
        for j in range(k):
            half = diag[j] // 2
            ranges.append(range(-half, 1) if j == 0 else range(-half, half + 1))
        for offdiag in itertools.product(*ranges):
            row, w = _ldl_extend(pivots, lower, offdiag)
            if k == rank - 1:
                partial = 1
                for p in pivots:
                    partial *= p
                last = Fraction(det_abs) / partial if k else Fraction(det_abs)
                pkk = last + w
                if pkk.denominator != 1:
                    continue
                pkk = int(pkk)
                low = diag[-1] if k else 1
                if pkk < low or prod * pkk > bound:
                    continue
                results.append(_assemble(rows, offdiag, pkk))
                continue
            start = diag[-1] if k else 1
            top = p11_max if k == 0 else None
            pkk = max(start, int(math.floor(w)) + 1)
            while True:
                if top is not None and pkk > top:
                    break
                if prod * pkk ** (rank - k) > bound:
                    break
                extend(_assemble(rows, offdiag, pkk), pivots + [pkk - w], lower + [row], prod * pkk)
                pkk += 1

    extend([], [], [], 1)
    return results


def _assemble(rows: List[List[int]], offdiag: Sequence[int], pkk: int) -> List[List[int]]:
    new = [list(r) + [offdiag[i]] for i, r in enumerate(rows)]
    new.append(list(offdiag) + [pkk])
    return new


@lru_cache(maxsize=None)
def enumerate_definite_forms(rank: int, det_abs: int,
                             present: Optional[FinAbGroup] = None) -> Tuple[QuadraticForm, ...]:
    """One negative definite form per integral class with the given rank and |det|"""
    if rank > MAX_RANK:
        raise ValueError("rank unsupported")
    if rank < 0 or det_abs < 1:
        raise ValueError(f"invalid rank {rank} or determinant {det_abs}")
    if rank == 0:
        forms = [QuadraticForm(IntSymMatrix(()))] if det_abs == 1 else []
    else:
        candidates = _hermite_candidates(rank, det_abs)
        forms = []
        buckets: Dict[tuple, List[QuadraticForm]] = {}
        for rows in candidates:
            form = QuadraticForm.of([[-x for x in r] for r in rows])
            key = _class_key(form)
            bucket = buckets.setdefault(key, [])
            if any(forms_equivalent(form, other) for other in bucket):
                continue
            bucket.append(form)
            forms.append(form)
        logger.debug(f"rank {rank}, det {det_abs}: {len(candidates)} reduced candidates, {len(forms)} classes")
    if present is not None:
        forms = [f for f in forms if cokernel(f.matrix)[0] == present]
    return tuple(forms)


def _class_key(form: QuadraticForm) -> tuple:
    positive = _positive(form.matrix)
    counts = tuple(len(_vectors_of_norm(positive, k)) for k in (1, 2, 3))
    return cokernel(form.matrix)[0].invariant_factors, counts


def _positive(q: IntSymMatrix) -> IntSymMatrix:
    return IntSymMatrix.from_rows([[-x for x in row] for row in q.entries])


@lru_cache(maxsize=None)
def _vectors_of_norm(p: IntSymMatrix, norm: int) -> Tuple[Tuple[int, ...], ...]:
    """Integer vectors x with x P x^T = norm for a positive definite P"""
    n = p.n
    det = p.det()
    adj = p.adjugate()
    bounds = [math.isqrt(norm * adj[i][i] // det) + 1 for i in range(n)]
    grid = np.array(list(itertools.product(*(range(-b, b + 1) for b in bounds))), dtype=np.int64)
    gram = np.array(p.rows(), dtype=np.int64)
    values = np.einsum("ij,jk,ik->i", grid, gram, grid)
    return tuple(tuple(int(x) for x in v) for v in grid[values == norm])


def _bilinear(p: IntSymMatrix, x: Sequence[int], y: Sequence[int]) -> int:
    return sum(x[i] * p.entries[i][j] * y[j] for i in range(p.n) for j in range(p.n))


def forms_equivalent(q1: QuadraticForm, q2: QuadraticForm) -> bool:
    """Whether a unimodular change of basis carries q1 to q2"""
    if q1.rank != q2.rank or q1.matrix.det() != q2.matrix.det():
        return False
    if q1.matrix == q2.matrix:
        return True
    n = q1.rank
    p1, p2 = _positive(q1.matrix), _positive(q2.matrix)
    candidates = [_vectors_of_norm(p2, p1.entries[i][i]) for i in range(n)]
    if any(not c for c in candidates):
        return False

    # equal Gram matrices and equal determinants force det(images) = +-1
    def extend(images: List[Tuple[int, ...]]) -> bool:
        i = len(images)
        if i == n:
            return True
        for v in candidates[i]:
            if all(_bilinear(p2, v, images[j]) == p1.entries[i][j] for j in range(i)):
                if extend(images + [v]):
                    return True
        return False

    return extend([])


def _characteristic_origin(q: IntSymMatrix) -> Tuple[int, ...]:
    """A characteristic covector lying in Q * Z^n"""
    n = q.n
    diag = q.diag()
    det = q.det()
    adj = q.adjugate()
    if all(sum(adj[i][j] * diag[j] for j in range(n)) % det == 0 for i in range(n)):
        return diag
    # solve Q y = diag over F2; the diagonal always lies in the F2 image of a symmetric matrix
    rows = [[q.entries[i][j] % 2 for j in range(n)] + [diag[i] % 2] for i in range(n)]
    pivots = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, n) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(n):
            if i != r and rows[i][col]:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    y = [0] * n
    for i, col in enumerate(pivots):
        y[col] = rows[i][n]
    return tuple(sum(q.entries[i][j] * y[j] for j in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def sq_table(form: QuadraticForm, method: str = "auto") -> SqTable:
    """Maximal square of a characteristic covector in every discriminant class

    `hypercube` scans the half-open hypercube of characteristic covectors,
    `forest` runs a dynamic program along the edges of a forest-shaped form, and
    `auto` switches to the forest program once the hypercube exceeds
    HYPERCUBE_LIMIT covectors.
    """
    if method not in SQ_METHODS:
        raise ValueError(f"unknown sq method {method}, expected one of {', '.join(SQ_METHODS)}")
    q = form.matrix
    n = q.n
    group, projection = cokernel(q)
    if n == 0:
        zero = group.zero()
        return SqTable(form, group, {zero: Fraction(0)}, frozenset([zero]), {zero: ()}, (), projection)

    origin = _characteristic_origin(q)
    order = None if method == "hypercube" else forest_order(q)
    if method == "forest" and order is None:
        raise ValueError(f"form {q} is not plumbed along a forest")
    covectors = math.prod(-d for d in q.diag())
    if order is not None and (method == "forest" or covectors > HYPERCUBE_LIMIT):
        sq, reps = _sq_on_forest(q, order, group, projection, origin)
        logger.debug(f"sq table of {q}: forest program over {group.order} classes")
    else:
        sq, reps = _sq_on_hypercube(q, group, projection, origin)
        logger.debug(f"sq table of {q}: {covectors} covectors, {group.order} classes")
    return SqTable(form, group, sq, frozenset(two_torsion(group)), reps, origin, projection)


def forest_order(q: IntSymMatrix) -> Optional[List[Tuple[int, int]]]:
    """(vertex, parent) pairs in depth-first order, or None when the off-diagonal graph has a cycle"""
    n = q.n
    neighbours = [[j for j in range(n) if j != i and q.entries[i][j]] for i in range(n)]
    seen = [False] * n
    order = []
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        stack = [(root, -1)]
        while stack:
            v, parent = stack.pop()
            order.append((v, parent))
            for u in neighbours[v]:
                if u == parent:
                    continue
                if seen[u]:
                    return None
                seen[u] = True
                stack.append((u, v))
    return order


def _sq_on_forest(q: IntSymMatrix, order: List[Tuple[int, int]], group: FinAbGroup,
                  projection: LatticeProjection, origin: Tuple[int, ...]):
    # With P = -Q and D = det P, a covector c = origin + 2y is c = -P Y / D for an
    # integer Y in -adj(P) c + 2D Z^n, and c Q^-1 c = -(Y P Y) / D^2.
    n = q.n
    p = _positive(q)
    rows = p.rows()
    det = p.det()
    adj = p.adjugate()
    step = 2 * det
    children: List[List[int]] = [[] for _ in range(n)]
    for v, parent in order:
        if parent >= 0:
            children[parent].append(v)

    sq, reps = {}, {}
    for element, lift in projection.lifts(n).items():
        covector = [o + 2 * k for o, k in zip(origin, lift)]
        residues = [-sum(adj[i][j] * covector[j] for j in range(n)) % step for i in range(n)]
        start = [r - step if 2 * r > step else r for r in residues]
        # Y_i^2 <= (Y P Y) * adj_ii / D at the minimum
        bound = _bilinear(p, start, start)
        windows = []
        for i, r in enumerate(residues):
            reach = math.isqrt(bound * adj[i][i] // det)
            windows.append([r + step * k for k in range(-((reach + r) // step), (reach - r) // step + 1)])
        best, ys = _forest_minimum(rows, order, children, windows)
        sq[element] = Fraction(-best, det * det)
        reps[element] = tuple(-sum(rows[i][j] * ys[j] for j in range(n)) // det for i in range(n))
    return sq, reps


def _forest_minimum(rows: List[List[int]], order: List[Tuple[int, int]], children: List[List[int]],
                    windows: List[List[int]]) -> Tuple[int, List[int]]:
    """Minimum of Y P Y over Y_i in windows[i] for forest-shaped P, with a minimizer"""
    n = len(windows)
    reach = [max(abs(w[0]), abs(w[-1])) for w in windows]
    magnitude = sum(abs(rows[i][j]) * reach[i] * reach[j] for i in range(n) for j in range(n))
    dtype = np.int64 if magnitude < _INT64_SAFE else object
    values = [np.array(w, dtype=dtype) for w in windows]
    cost: List[Optional[np.ndarray]] = [None] * n
    choice: List[Optional[np.ndarray]] = [None] * n
    for v, _ in reversed(order):
        total = rows[v][v] * values[v] * values[v]
        for c in children[v]:
            table = 2 * rows[v][c] * np.outer(values[v], values[c]) + cost[c][np.newaxis, :]
            pick = table.argmin(axis=1)
            choice[c] = pick
            total = total + table[np.arange(len(values[v])), pick]
        cost[v] = total

    best = 0
    index = [0] * n
    for v, parent in order:
        if parent < 0:
            index[v] = int(cost[v].argmin())
            best += int(cost[v][index[v]])
        else:
            index[v] = int(choice[v][index[parent]])
    return best, [int(values[i][index[i]]) for i in range(n)]


def _sq_on_hypercube(q: IntSymMatrix, group: FinAbGroup, projection: LatticeProjection,
                     origin: Tuple[int, ...]):
    n = q.n
    det = q.det()
    adj = q.adjugate()
    diag = q.diag()

    ranges = [np.arange(d, -d, 2) for d in diag]
    biggest = max(-d for d in diag)
    adj_max = max(abs(x) for row in adj for x in row)
    proj_max = max((abs(x) for row in projection.rows for x in row), default=1)
    fits = n * n * biggest * biggest * adj_max < _INT64_SAFE and n * biggest * proj_max < _INT64_SAFE
    dtype = np.int64 if fits else object
    grid = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, n).astype(dtype)
    numerators = ((grid @ np.array(adj, dtype=dtype)) * grid).sum(axis=1)

    halves = (grid - np.array(origin, dtype=dtype)) // 2
    moduli = group.invariant_factors
    if moduli:
        proj = np.array(projection.rows, dtype=dtype)
        labels = np.mod(halves @ proj.T, np.array(moduli, dtype=dtype))
    else:
        labels = np.zeros((len(grid), 0), dtype=dtype)

    # det has sign (-1)^n, so the largest square has the largest num * sign(det)
    sign = 1 if det > 0 else -1
    keys = numerators * sign
    best: Dict[Tuple[int, ...], Tuple[int, int]] = {}
    if fits:
        strides = np.cumprod((1,) + moduli[:-1]) if moduli else np.zeros(0, dtype=np.int64)
        codes = labels @ strides if moduli else np.zeros(len(grid), dtype=np.int64)
        order = np.lexsort((-keys, codes))
        _, first = np.unique(codes[order], return_index=True)
        for idx in order[first]:
            best[tuple(int(x) for x in labels[idx])] = (int(keys[idx]), int(idx))
    else:
        for idx, (label, key) in enumerate(zip(map(tuple, labels.tolist()), keys.tolist())):
            current = best.get(label)
            if current is None or key > current[0]:
                best[label] = (key, idx)

    if len(best) != group.order:
        raise ValueError(f"only {len(best)} of {group.order} classes received a covector")

    sq, reps = {}, {}
    for label, (key, idx) in best.items():
        element = GroupElement(group, tuple(int(x) for x in label))
        sq[element] = Fraction(int(key) * sign, det)
        reps[element] = tuple(int(x) for x in grid[idx])
    return sq, reps


def omega_points_rank2(a: int, b: int, c: int) -> List[OmegaPoint]:
    """Characteristic points of the region attached to a reduced rank-2 form"""
    if not (0 >= 2 * b >= a >= c) or a * c - b * b <= 0:
        raise ValueError(f"form ({a}, {b}, {c}) is not reduced")
    form = QuadraticForm.of([[a, b], [b, c]])
    table = sq_table(form)
    det = a * c - b * b
    s = a - 2 * b + c
    points = []
    for x in range(a, -a):
        if (x - a) % 2:
            continue
        for y in range(c, -c):
            if (y - c) % 2 or not (s <= x - y < -s):
                continue
            # (x, y) Q^{-1} (x, y)^T with Q^{-1} = [[c, -b], [-b, a]] / det
            square = Fraction(c * x * x - 2 * b * x * y + a * y * y, det)
            label = table.classify((x, y))
            points.append(OmegaPoint((x, y), label, square, label in table.jfixed))
    return points


def spin_vectors_rank2(a: int, b: int, c: int) -> List[Tuple[int, int]]:
    """Characteristic vectors among the images of 0, e1, e2 and e1 - e2"""
    candidates = [(0, 0), (a, b), (b, c), (a - b, b - c)]
    return [v for v in candidates if (v[0] - a) % 2 == 0 and (v[1] - c) % 2 == 0]
