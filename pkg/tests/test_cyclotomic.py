"""
Test suite for exact cyclotomic arithmetic
"""

import unittest
from fractions import Fraction
from pathlib import Path
import sys

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from algebra import inertia
from cyclotomic import CyclotomicNumber, real_sign


class TestCyclotomicNumber(unittest.TestCase):
    """Test CyclotomicNumber"""

    def test_root_order(self):
        for n in (2, 3, 5, 12):
            zeta = CyclotomicNumber.root(n)
            power = CyclotomicNumber.rational(n, 1)
            for _ in range(n):
                power = power * zeta
            self.assertEqual(power, 1)

    def test_square_root_of_minus_one(self):
        i = CyclotomicNumber.root(4)
        self.assertEqual(i * i, -1)

    def test_conjugate_is_inverse(self):
        zeta = CyclotomicNumber.root(7, 3)
        self.assertEqual(zeta * zeta.conjugate(), 1)

    def test_division(self):
        x = 1 - CyclotomicNumber.root(5)
        self.assertEqual((x / x), 1)
        with self.assertRaises(ZeroDivisionError):
            x / CyclotomicNumber.rational(5, 0)

    def test_mixed_fields(self):
        with self.assertRaises(ValueError):
            CyclotomicNumber.root(3) + CyclotomicNumber.root(5)

    def test_real_sign(self):
        """Test 2 - w - conj(w) = 2 - 2 cos(2 pi / n) is positive"""
        for n in (3, 6, 24):
            w = CyclotomicNumber.root(n)
            self.assertEqual((2 - w - w.conjugate()).real_sign(), 1)
        w = CyclotomicNumber.root(6)
        self.assertEqual((w + w.conjugate() - 1).real_sign(), 0)
        self.assertEqual(real_sign((w + w.conjugate() - 3)), -1)

    def test_real_sign_rationals(self):
        self.assertEqual(real_sign(Fraction(-1, 3)), -1)
        self.assertEqual(real_sign(0), 0)

    def test_complex_value(self):
        value = CyclotomicNumber.root(4).to_complex()
        self.assertAlmostEqual(float(value.real), 0.0)
        self.assertAlmostEqual(float(value.imag), 1.0)


class TestHermitianInertia(unittest.TestCase):
    """Test inertia over Q(zeta_n)"""

    def test_hermitian_2x2(self):
        """Test [[2, 1 - w], [1 - conj w, 2]] with w = exp(2 pi i / 6) is positive definite"""
        w = CyclotomicNumber.root(6)
        rows = [[CyclotomicNumber.rational(6, 2), 1 - w],
                [1 - w.conjugate(), CyclotomicNumber.rational(6, 2)]]
        self.assertEqual(inertia(rows, sign=real_sign), (2, 0, 0))

    def test_hermitian_indefinite(self):
        w = CyclotomicNumber.root(3)
        rows = [[CyclotomicNumber.rational(3, 0), 1 + w],
                [1 + w.conjugate(), CyclotomicNumber.rational(3, 0)]]
        self.assertEqual(inertia(rows, sign=real_sign), (1, 1, 0))


if __name__ == "__main__":
    unittest.main()
