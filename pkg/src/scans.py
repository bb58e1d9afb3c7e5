"""
Scans - Runs the genus obstruction over families of two-bridge and Montesinos links
and reproduces the worked examples
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import partial
from math import gcd
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from dinv import SeifertData, correction_table
from links import (LinkDescriptor, determinant, format_rational,
                   genus_obstruction, link_invariants, montesinos_range, parse_descriptor,
                   seifert_matrix, slice_check, taylor_bracket, two_bridge_representative)
from algebra import FinAbGroup
from obstruction import check_bound
from qforms import enumerate_definite_forms, enumerate_rank2_reduced, sq_table

logger = logging.getLogger(__name__)

PROGRESS_EVERY = 500


@dataclass(frozen=True)
class ScanRow:
    """One line of a genus table"""

    link: str
    mu: int
    sigma: int
    h1: str
    m: Optional[str] = None
    genus_gt: Optional[str] = None
    note: Optional[str] = None

    @property
    def verdict(self) -> str:
        if self.note:
            return self.note
        return f"g* > {self.genus_gt}" if self.genus_gt is not None else "-"

    def to_dict(self) -> Dict:
        data = asdict(self)
        data.pop("note")
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "ScanRow":
        return cls(data["link"], int(data["mu"]), int(data["sigma"]), data["h1"],
                   data.get("m"), data.get("genus_gt"))


def descriptor_key(d: LinkDescriptor) -> tuple:
    if d.is_two_bridge:
        return (0, d.p, d.q)
    return (1, d.e, d.pairs)


def sort_rows(rows: Iterable[ScanRow]) -> List[ScanRow]:
    return sorted(rows, key=lambda r: descriptor_key(parse_descriptor(r.link)))


class ScanRows(list):
    """Sorted rows of a scan together with the links it had to skip"""

    def __init__(self, rows: Iterable[ScanRow] = (), skipped: Iterable[Tuple[str, str]] = ()):
        super().__init__(rows)
        self.skipped: List[Tuple[str, str]] = list(skipped)


def _guarded(worker: Callable, item) -> Tuple[Optional[ScanRow], Optional[str]]:
    try:
        return worker(item), None
    except ValueError as e:
        return None, str(e)


def _run(worker: Callable, items: Sequence, jobs: int) -> ScanRows:
    """Apply worker to every item, in parallel when jobs > 1; rows come back sorted"""
    rows, skipped = [], []
    guarded = partial(_guarded, worker)
    if jobs > 1:
        executor = ProcessPoolExecutor(max_workers=jobs)
        results = executor.map(guarded, items, chunksize=8)
    else:
        executor = None
        results = map(guarded, items)
    try:
        for i, (item, (row, error)) in enumerate(zip(items, results), 1):
            if error is not None:
                logger.warning(f"Skipping {item}: {error}")
                skipped.append((str(item), error))
            elif row is not None:
                rows.append(row)
            if i % PROGRESS_EVERY == 0:
                logger.info(f"Scanned {i}/{len(items)} links, {len(rows)} rows")
    finally:
        if executor is not None:
            executor.shutdown()
    logger.info(f"Scan finished: {len(items)} links, {len(rows)} rows, {len(skipped)} skipped")
    return ScanRows(sort_rows(rows), skipped)


def genus_row(d: LinkDescriptor, sigma_max: int, taylor_bound: Optional[int] = 2,
              max_order: int = 12, orbit_reduction: bool = True) -> Optional[ScanRow]:
    """Row for d when 1 <= |sigma| <= sigma_max and the genus obstruction succeeds"""
    inv = link_invariants(d)
    if not 1 <= abs(inv.sigma) <= sigma_max:
        return None
    report = genus_obstruction(d, orbit_reduction, inv)
    if not report.obstructed:
        return None
    m = None
    if inv.is_knot and taylor_bound is not None:
        m = str(taylor_bracket(seifert_matrix(d), taylor_bound, max_order))
    return ScanRow(str(d), inv.mu, inv.sigma, str(inv.h1), m, format_rational(report.murasugi_bound))


def twobridge_range(pmax: int, pmin: int = 2) -> List[LinkDescriptor]:
    """One S(p,q) per equivalence class q ~ q^-1 mod p"""
    if pmax < 2:
        raise ValueError("pmax must be at least 2")
    return [LinkDescriptor.two_bridge(p, q)
            for p in range(max(pmin, 2), pmax + 1)
            for q in range(1, p)
            if gcd(p, q) == 1 and q == two_bridge_representative(p, q)]


def scan_twobridge(pmax: int = 120, sigma_max: int = 4, jobs: int = 1, taylor_bound: Optional[int] = 2,
                   max_order: int = 12, orbit_reduction: bool = True, pmin: int = 2) -> ScanRows:
    """Obstructed two-bridge links with p <= pmax and 1 <= |sigma| <= sigma_max"""
    items = twobridge_range(pmax, pmin)
    logger.info(f"Two-bridge scan over {len(items)} links, p <= {pmax}")
    worker = partial(genus_row, sigma_max=sigma_max, taylor_bound=taylor_bound,
                     max_order=max_order, orbit_reduction=orbit_reduction)
    return _run(worker, items, jobs)


def scan_montesinos(emin: int = -2, emax: int = 1, alpha_max: int = 5, det_max: int = 150,
                    sigma_max: int = 4, jobs: int = 1, orbit_reduction: bool = True) -> ScanRows:
    """Obstructed three-tangle Montesinos links with 0 < det < det_max"""
    if emin > emax or alpha_max < 2:
        raise ValueError("empty Montesinos range")
    items = [d for d in montesinos_range(emin, emax, alpha_max) if 0 < determinant(d) < det_max]
    logger.info(f"Montesinos scan over {len(items)} links")
    worker = partial(genus_row, sigma_max=sigma_max, taylor_bound=None, orbit_reduction=orbit_reduction)
    return _run(worker, items, jobs)


def slice_row(d: LinkDescriptor) -> Optional[ScanRow]:
    """Row for a knot whose double cover passes the rational ball test"""
    report = slice_check(d)
    if report.obstructed:
        return None
    inv = link_invariants(d)
    return ScanRow(str(d), inv.mu, inv.sigma, str(inv.h1), note="rational ball")


def scan_slice(tmax: int = 30, jobs: int = 1) -> ScanRows:
    """Knots S(t^2, q), t odd, whose cover is not ruled out from bounding a rational ball"""
    items = [d for t in range(3, tmax + 1, 2) for d in twobridge_range(t * t, t * t)]
    logger.info(f"Slice scan over {len(items)} knots, t <= {tmax}")
    return _run(slice_row, items, jobs)


# --- worked examples ----------------------------------------------------------

def _values(values: Iterable) -> str:
    return "[" + ", ".join(format_rational(v) for v in values) + "]"


def reproduce_small_example(orbit_reduction: bool = True, taylor_bound: int = 2) -> str:
    """The knot M(1;3/1,3/1,5/2): cover tables, rank-2 forms and the verdict"""
    d = parse_descriptor("M(1;3/1,3/1,5/2)")
    inv = link_invariants(d, taylor_bound=taylor_bound)
    table = correction_table(SeifertData(-1, ((3, 1), (3, 1), (5, 2)))).reversed()
    lines = [
        f"{d}: mu={inv.mu} sigma={inv.sigma} det={inv.h} H1={inv.h1} m={inv.taylor}",
        f"correction terms of -Y: {_values(table.values())}",
        "negative definite rank-2 forms of determinant 3:",
    ]
    for form in enumerate_rank2_reduced(3):
        lines.append(f"  {form}  sq: {_values(sq_table(form).values())}")
    report = check_bound(table, 2, orbit_reduction)
    lines.append(f"b=2: {'obstructed' if report.obstructed else 'not obstructed'}")
    lines.append(f"{d}: {genus_obstruction(d, orbit_reduction, inv).conclusion}")
    return "\n".join(lines) + "\n"


def reproduce_large_example(orbit_reduction: bool = True) -> str:
    """The knot M(1;5/2,5/2,5/2): 25 correction terms and the rank-4 forms"""
    d = parse_descriptor("M(1;5/2,5/2,5/2)")
    inv = link_invariants(d)
    table = correction_table(SeifertData(-1, ((5, 2), (5, 2), (5, 2)))).reversed()
    lines = [f"{d}: mu={inv.mu} sigma={inv.sigma} det={inv.h} H1={inv.h1}", "correction terms of -Y:"]
    elements = list(table.group.elements())
    for i in range(0, len(elements), 5):
        lines.append("  " + " ".join(format_rational(table(x)).rjust(6) for x in elements[i:i + 5]))
    lines.append(f"spin value: {format_rational(table(table.group.zero()))}")
    lines.append(f"non-negative terms: {sum(1 for v in table.values() if v >= 0)}")
    lines.append(f"rank 4, det 1 classes: {len(enumerate_definite_forms(4, 1))}")
    forms = enumerate_definite_forms(4, 25, FinAbGroup((5, 5)))
    lines.append(f"rank 4, det 25 classes with H = Z/5+Z/5: {len(forms)}")
    for form in forms:
        squares = sq_table(form)
        survivors = sum(1 for v in squares.sq.values() if v + 4 >= 0)
        lines.append(f"  {form}  classes with sq + 4 >= 0: {survivors}")
    lines.append(f"{d}: {genus_obstruction(d, orbit_reduction, inv).conclusion}")
    return "\n".join(lines) + "\n"
