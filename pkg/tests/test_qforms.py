"""
Test suite for negative definite forms and maximal squares
"""

import itertools
import os
import unittest
from fractions import Fraction
from pathlib import Path
import sys

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from algebra import FinAbGroup, IntSymMatrix
from dinv import SeifertData, lens_plumbing, plumbing_from_seifert
from qforms import (QuadraticForm, enumerate_definite_forms, enumerate_rank2_reduced, forest_order,
                    forms_equivalent, omega_points_rank2, spin_vectors_rank2, sq_table)

SLOW = os.getenv("DEFINITE_BOUNDS_SLOW_TESTS") == "1"


def _multiset(values):
    return sorted(Fraction(v) for v in values)


class TestRank2Reduced(unittest.TestCase):
    """Test enumerate_rank2_reduced"""

    def test_det3(self):
        forms = {f.matrix for f in enumerate_rank2_reduced(3)}
        self.assertEqual(forms, {IntSymMatrix.from_rows([[-1, 0], [0, -3]]),
                                 IntSymMatrix.from_rows([[-2, -1], [-1, -2]])})

    def test_det1(self):
        self.assertEqual([f.matrix for f in enumerate_rank2_reduced(1)],
                         [IntSymMatrix.diagonal([-1, -1])])

    def test_det25_imprimitive(self):
        """Test only diag(-5,-5) has every entry divisible by 5"""
        imprimitive = [f for f in enumerate_rank2_reduced(25)
                       if all(x % 5 == 0 for row in f.matrix.entries for x in row)]
        self.assertEqual([f.matrix for f in imprimitive], [IntSymMatrix.diagonal([-5, -5])])

    def test_invalid_determinant(self):
        with self.assertRaises(ValueError):
            enumerate_rank2_reduced(0)


class TestDefiniteForms(unittest.TestCase):
    """Test enumerate_definite_forms and forms_equivalent"""

    def test_rank1(self):
        for s in (1, 2, 7, 12):
            forms = enumerate_definite_forms(1, s)
            self.assertEqual([f.matrix for f in forms], [IntSymMatrix.from_rows([[-s]])])

    def test_rank2_matches_reduced_scan(self):
        """Test class counts agree with the reduced rank-2 list for small determinants"""
        for r in range(1, 16):
            self.assertEqual(len(enumerate_definite_forms(2, r)), len(enumerate_rank2_reduced(r)), r)

    def test_rank4_unimodular(self):
        forms = enumerate_definite_forms(4, 1)
        self.assertEqual(len(forms), 1)
        self.assertTrue(forms_equivalent(forms[0], QuadraticForm(IntSymMatrix.diagonal([-1, -1, -1, -1]))))

    def test_rank4_det25_present(self):
        forms = enumerate_definite_forms(4, 25, FinAbGroup((5, 5)))
        self.assertEqual(len(forms), 4)
        for form in forms:
            self.assertEqual(form.det_abs, 25)
            survivors = sum(1 for v in sq_table(form).sq.values() if v + 4 >= 0)
            self.assertGreaterEqual(survivors, 10, str(form))

    def test_rank_unsupported(self):
        with self.assertRaises(ValueError):
            enumerate_definite_forms(5, 1)

    def test_not_equivalent(self):
        self.assertFalse(forms_equivalent(QuadraticForm.of([[-1, 0], [0, -3]]),
                                          QuadraticForm.of([[-2, -1], [-1, -2]])))

    def test_equivalent_under_basis_change(self):
        q = QuadraticForm.of([[-2, 1, 0], [1, -3, 1], [0, 1, -4]])
        u = [[1, 1, 0], [0, 1, 2], [0, 0, 1]]
        self.assertTrue(forms_equivalent(q, QuadraticForm(q.matrix.congruent(u))))

    def test_not_definite(self):
        with self.assertRaises(ValueError):
            QuadraticForm.of([[-1, 0], [0, 1]])


class TestSqTable(unittest.TestCase):
    """Test sq_table"""

    def test_rank1(self):
        table = sq_table(QuadraticForm.of([[-3]]))
        self.assertEqual(table.values(), _multiset([-3, Fraction(-1, 3), Fraction(-1, 3)]))
        fixed = [table.sq[x] for x in table.jfixed]
        self.assertEqual(fixed, [Fraction(-3)])

    def test_rank1_general(self):
        """Test sq(i) = -(2i - s)^2 / s on [-s]"""
        for s in range(1, 12):
            table = sq_table(QuadraticForm.of([[-s]]))
            expected = _multiset(Fraction(-(2 * i - s) ** 2, s) for i in range(s))
            self.assertEqual(table.values(), expected)

    def test_diag_1_3(self):
        table = sq_table(QuadraticForm.of([[-1, 0], [0, -3]]))
        self.assertEqual(table.values(), _multiset([-4, Fraction(-4, 3), Fraction(-4, 3)]))

    def test_rank2_det3(self):
        table = sq_table(QuadraticForm.of([[-2, -1], [-1, -2]]))
        self.assertEqual(table.values(), _multiset([0, Fraction(-8, 3), Fraction(-8, 3)]))

    def test_unimodular_rank4(self):
        table = sq_table(QuadraticForm(IntSymMatrix.diagonal([-1, -1, -1, -1])))
        self.assertEqual(table.values(), [Fraction(-4)])

    def test_empty_form(self):
        table = sq_table(QuadraticForm(IntSymMatrix(())))
        self.assertEqual(table.values(), [Fraction(0)])

    def test_conjugation_symmetry(self):
        table = sq_table(QuadraticForm.of([[-2, 1, 0], [1, -3, 1], [0, 1, -4]]))
        for x, v in table.sq.items():
            self.assertEqual(table.sq[-x], v)

    def test_representatives_classify(self):
        table = sq_table(QuadraticForm.of([[-2, -1], [-1, -3]]))
        for x, covector in table.class_reps.items():
            self.assertEqual(table.classify(covector), x)

    def test_forest_matches_hypercube(self):
        forms = [QuadraticForm.of([[-3]]), QuadraticForm.of([[-2, -1], [-1, -3]]),
                 QuadraticForm.of([[-2, 1, 0], [1, -3, 1], [0, 1, -4]]),
                 QuadraticForm(lens_plumbing(13, 5).matrix), QuadraticForm(lens_plumbing(12, 11).matrix),
                 QuadraticForm(plumbing_from_seifert(SeifertData(-1, ((3, 1), (3, 1), (5, 2)))).matrix),
                 QuadraticForm(IntSymMatrix.diagonal([-2, -3, -1]))]
        for form in forms:
            forest = sq_table(form, "forest")
            cube = sq_table(form, "hypercube")
            self.assertEqual(forest.sq, cube.sq, str(form))
            inverse = form.matrix.adjugate()
            det = form.matrix.det()
            for x, covector in forest.class_reps.items():
                self.assertEqual(forest.classify(covector), x)
                square = Fraction(sum(covector[i] * inverse[i][j] * covector[j]
                                      for i in range(form.rank) for j in range(form.rank)), det)
                self.assertEqual(square, forest.sq[x])

    def test_hypercube_is_maximal(self):
        """Test the hypercube maximum against every characteristic covector in a three times larger box"""
        for rows in ([[-3]], [[-2, -1], [-1, -3]], [[-5, 2], [2, -3]], [[-2, 1, 0], [1, -3, 1], [0, 1, -4]]):
            form = QuadraticForm.of(rows)
            table = sq_table(form, "hypercube")
            inverse = form.matrix.adjugate()
            det = form.matrix.det()
            best = {}
            ranges = [range(3 * rows[i][i], -3 * rows[i][i] + 1, 2) for i in range(form.rank)]
            for covector in itertools.product(*ranges):
                square = Fraction(sum(covector[i] * inverse[i][j] * covector[j]
                                      for i in range(form.rank) for j in range(form.rank)), det)
                label = table.classify(covector)
                best[label] = max(best.get(label, square), square)
            self.assertEqual(best, table.sq, str(form))

    def test_cycle_rejected_by_forest(self):
        triangle = QuadraticForm.of([[-3, 1, 1], [1, -3, 1], [1, 1, -3]])
        self.assertIsNone(forest_order(triangle.matrix))
        with self.assertRaises(ValueError):
            sq_table(triangle, "forest")
        self.assertEqual(len(sq_table(triangle).sq), triangle.det_abs)

    def test_unknown_method(self):
        with self.assertRaises(ValueError):
            sq_table(QuadraticForm.of([[-3]]), "lattice")

    def test_forest_order_parents_first(self):
        order = forest_order(lens_plumbing(13, 5).matrix)
        seen = set()
        for v, parent in order:
            self.assertTrue(parent < 0 or parent in seen)
            seen.add(v)
        self.assertEqual(seen, set(range(len(order))))


class TestOmegaPoints(unittest.TestCase):
    """Test omega_points_rank2 against the hypercube"""

    def test_diag_1_3(self):
        points = omega_points_rank2(-1, 0, -3)
        self.assertEqual({p.covector for p in points}, {(-1, -3), (-1, -1), (-1, 1)})
        self.assertEqual(_multiset(p.square for p in points), _multiset([-4, Fraction(-4, 3), Fraction(-4, 3)]))

    def test_rank2_det3(self):
        points = omega_points_rank2(-2, -1, -2)
        self.assertEqual({p.covector for p in points}, {(0, 0), (-2, -2), (-2, 0)})
        self.assertEqual(_multiset(p.square for p in points), _multiset([0, Fraction(-8, 3), Fraction(-8, 3)]))

    def test_unimodular(self):
        points = omega_points_rank2(-1, 0, -1)
        self.assertEqual([(p.covector, p.square) for p in points], [((-1, -1), Fraction(-2))])

    def test_not_reduced(self):
        with self.assertRaises(ValueError):
            omega_points_rank2(-3, 0, -1)

    def test_spin_vectors_characteristic(self):
        for a, b, c in ((-1, 0, -3), (-2, -1, -2), (-4, -1, -6)):
            for v in spin_vectors_rank2(a, b, c):
                self.assertEqual((v[0] - a) % 2, 0)
                self.assertEqual((v[1] - c) % 2, 0)

    @unittest.skipUnless(SLOW, "set DEFINITE_BOUNDS_SLOW_TESTS=1")
    def test_hypercube_matches_regions(self):
        """Test every reduced form with det <= 60"""
        for r in range(1, 61):
            for form in enumerate_rank2_reduced(r):
                (a, b), (_, c) = form.matrix.entries
                table = sq_table(form)
                points = omega_points_rank2(a, b, c)
                self.assertEqual(len(points), r)
                for p in points:
                    self.assertEqual(table.sq[p.label], p.square)

    def test_hypercube_matches_regions_small(self):
        for r in range(1, 13):
            for form in enumerate_rank2_reduced(r):
                (a, b), (_, c) = form.matrix.entries
                table = sq_table(form)
                for p in omega_points_rank2(a, b, c):
                    self.assertEqual(table.sq[p.label], p.square)


if __name__ == "__main__":
    unittest.main()
