"""
Two-Bridge Links - Invariants of S(p,q) read off the fraction p/q
"""

import logging
from fractions import Fraction
from math import gcd
from typing import List, Tuple

logger = logging.getLogger(__name__)


def component_count(p: int) -> int:
    return 1 if p % 2 else 2


def signature(p: int, q: int) -> int:
    """Floor-sum signature of the two-bridge knot S(p,q), p odd"""
    if p % 2 == 0:
        raise ValueError(f"S({p},{q}) is a link; use the diagram signature")
    if gcd(p, q) != 1:
        raise ValueError(f"gcd({p}, {q}) != 1")
    q %= p
    if q % 2 == 0:
        q -= p
    return sum(1 if (i * q // p) % 2 == 0 else -1 for i in range(1, p))


def even_continued_fraction(num: int, den: int) -> List[int]:
    """num/den = [a1, ..., a2g] = a1 - 1/(a2 - ...) with every ai even; num odd, den even"""
    if num % 2 == 0 or den % 2:
        raise ValueError(f"{num}/{den} needs an odd numerator and an even denominator")
    terms = []
    while True:
        if num % den == 0 and (num // den) % 2 == 0:
            terms.append(num // den)
            return terms
        a = 2 * round(Fraction(num, 2 * den))
        terms.append(a)
        num, den = den, a * den - num


def seifert_matrix(p: int, q: int) -> Tuple[Tuple[int, ...], ...]:
    """Seifert matrix of the plumbed band surface of the knot S(p,q)

    The bands are twisted by -a_i/2 full twists for the even fraction of p/q'
    with q' the even representative of q mod p.
    """
    if p % 2 == 0:
        raise ValueError(f"S({p},{q}) is not a knot")
    q %= p
    if q % 2:
        q -= p
    terms = even_continued_fraction(p, q)
    a = len(terms)
    rows = [[0] * a for _ in range(a)]
    for i, t in enumerate(terms):
        rows[i][i] = -t // 2
        if i + 1 < a:
            rows[i][i + 1] = 1
    logger.debug(f"S({p},{q}): even fraction {terms}")
    return tuple(tuple(r) for r in rows)
