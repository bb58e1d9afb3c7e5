"""
Obstruction - Decides whether Y can bound a negative definite X with b2(X) = b
Runs over factorizations h = s*t^2, order-t subgroups T, forms of rank b and
determinant s, monomorphisms into H/T and conjugation-invariant origins
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Tuple

from algebra import (GroupElement, GroupHom, IntSymMatrix, Quotient, embeds_in,
                     homomorphisms, invariant_cosets, quotient, subgroups_of_order)
from dinv import CorrectionTable
from qforms import QuadraticForm, enumerate_definite_forms, sq_table

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Factorization:
    h: int
    s: int
    t: int

    def __post_init__(self):
        if self.s * self.t * self.t != self.h:
            raise ValueError(f"{self.h} != {self.s} * {self.t}^2")


@dataclass
class Combination:
    """One choice of (s, t), T, Q, rho and origin"""

    factorization: Factorization
    subgroup: Tuple[GroupElement, ...]
    form: QuadraticForm
    rho: GroupHom
    origin: GroupElement
    quotient: Quotient = field(repr=False, compare=False)

    def describe(self) -> str:
        images = ", ".join(str(x) for x in self.rho.images) or "-"
        return (f"s={self.factorization.s} t={self.factorization.t} "
                f"T={{{', '.join(str(x) for x in self.subgroup)}}} Q={self.form} "
                f"rho(gens)=[{images}] origin={self.origin}")


@dataclass
class ObstructionReport:
    obstructed: bool
    b: int
    witness: Optional[Combination] = None
    stats: Dict[str, int] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.obstructed == (self.witness is not None):
            raise ValueError("a report carries a witness exactly when it is not obstructed")


# keep at most this many first-failure summaries per report
MAX_FAILURES = 20


def factorizations(h: int) -> List[Factorization]:
    """All (s, t) with s * t^2 = h, ordered by t"""
    if h < 1:
        raise ValueError("h must be positive")
    return [Factorization(h, h // (t * t), t) for t in range(1, isqrt(h) + 1) if h % (t * t) == 0]


def d_rho_min(table: CorrectionTable, quo: Quotient, origin: GroupElement,
              coset_rep: GroupElement) -> Fraction:
    """Minimum of d over the coset origin + lift(coset_rep) + T"""
    base = origin + quo.lift(coset_rep)
    return min(table(base + tau) for tau in quo.subgroup)


def check_single(table: CorrectionTable, b: int, combo: Combination,
                 orbit_reduction: bool = True) -> Tuple[bool, Optional[GroupElement]]:
    """Test sq(alpha) + b <= 4 d_rho(alpha) for every class alpha of Q"""
    squares = sq_table(combo.form)
    for alpha in squares.group.elements():
        if orbit_reduction and (-alpha) < alpha:
            continue
        bound = 4 * d_rho_min(table, combo.quotient, combo.origin, combo.rho(alpha))
        if squares.sq[alpha] + b > bound:
            return False, alpha
    return True, None


def check_bound(table: CorrectionTable, b: int, orbit_reduction: bool = True) -> ObstructionReport:
    """Whether every combination violates the inequality for b2(X) = b"""
    if b < 0:
        raise ValueError("b must be non-negative")
    if b == 0:
        return check_rational_ball(table)

    group = table.group
    stats: Counter = Counter()
    failures: List[str] = []

    for fact in factorizations(table.order):
        forms = enumerate_definite_forms(b, fact.s)
        stats["forms"] += len(forms)
        if not forms:
            continue
        for subgroup in subgroups_of_order(group, fact.t):
            quo = quotient(group, subgroup)
            origins = invariant_cosets(group, subgroup)
            stats["subgroups"] += 1
            for form in forms:
                source = sq_table(form).group
                if not embeds_in(source, quo.group):
                    stats["not_embedded"] += 1
                    continue
                for rho in homomorphisms(source, quo.group, injective_only=True):
                    for origin in origins:
                        combo = Combination(fact, subgroup, form, rho, origin, quo)
                        stats["combinations"] += 1
                        passed, alpha = check_single(table, b, combo, orbit_reduction)
                        if passed:
                            logger.info(f"{table.source}, b={b}: witness {combo.describe()}")
                            return ObstructionReport(False, b, combo, dict(stats), failures)
                        if len(failures) < MAX_FAILURES:
                            failures.append(f"{combo.describe()} fails at {alpha}")
                        logger.debug(f"{combo.describe()} fails at {alpha}")

    logger.info(f"{table.source}, b={b}: obstructed after {stats['combinations']} combinations")
    return ObstructionReport(True, b, None, dict(stats), failures)


def check_rational_ball(table: CorrectionTable) -> ObstructionReport:
    """d vanishes on a coset t0 + T with |T|^2 = |H| and 2 t0 in T

    Such a coset is closed under conjugation; t0 need not be a spin structure.
    """
    group = table.group
    h = table.order
    t = isqrt(h)
    if t * t != h:
        return ObstructionReport(True, 0, None, {"combinations": 0}, [f"|H| = {h} is not a square"])
    stats: Counter = Counter()
    failures: List[str] = []
    for subgroup in subgroups_of_order(group, t):
        for start in invariant_cosets(group, subgroup):
            stats["combinations"] += 1
            if all(table(start + tau) == 0 for tau in subgroup):
                quo = quotient(group, subgroup)
                empty = QuadraticForm(IntSymMatrix(()))
                rho = GroupHom(sq_table(empty).group, quo.group, ())
                combo = Combination(Factorization(h, 1, t), subgroup, empty, rho, start, quo)
                return ObstructionReport(False, 0, combo, dict(stats), failures)
            if len(failures) < MAX_FAILURES:
                failures.append(f"d does not vanish on {start} + {{{', '.join(str(x) for x in subgroup)}}}")
    return ObstructionReport(True, 0, None, dict(stats), failures)
