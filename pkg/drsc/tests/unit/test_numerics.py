#    Licensed under the Apache License, Version 2.0 (the "License"); you may
#    not use this file except in compliance with the License. You may obtain
#    a copy of the License at
#
#         http://www.apache.org/licenses/LICENSE-2.0
#
#    Unless required by applicable law or agreed to in writing, software
#    distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
#    WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
#    License for the specific language governing permissions and limitations
#    under the License.

from fractions import Fraction as F

import testtools

from drsc import exception
from drsc import numerics


class TestRationalHelpers(testtools.TestCase):

    def test_as_rational_refuses_floats(self):
        self.assertRaises(exception.InvalidSourceModel,
                          numerics.as_rational, 0.5)
        self.assertEqual(F(1, 3), numerics.as_rational('1/3'))
        self.assertEqual(F(2), numerics.as_rational(2))

    def test_log2_of_huge_rationals(self):
        self.assertEqual(-3.0, numerics.log2(F(1, 8)))
        value = F(1, 2 ** 4000)
        self.assertEqual(-4000.0, numerics.log2(value))

    def test_step_exponents(self):
        self.assertEqual(2, numerics.step_exponent_within(F(1, 4)))
        self.assertEqual(3, numerics.step_exponent_below(F(1, 4)))
        self.assertEqual(2, numerics.step_exponent_within(F(3, 8)))
        self.assertEqual(2, numerics.step_exponent_below(F(3, 8)))
        self.assertEqual(1, numerics.step_exponent_within(1))
        self.assertEqual(1, numerics.step_exponent_below(1))
        self.assertEqual(11, numerics.step_exponent_within(F(1, 1025)))


class TestBitString(testtools.TestCase):

    def test_from_str(self):
        bits = numerics.BitString.from_str('0110')
        self.assertEqual(6, bits.value)
        self.assertEqual(4, len(bits))
        self.assertEqual('0110', str(bits))
        self.assertEqual([0, 1, 1, 0], list(bits))

    def test_empty(self):
        bits = numerics.BitString.from_str('')
        self.assertEqual(0, len(bits))
        self.assertEqual('', str(bits))

    def test_rejects_garbage(self):
        self.assertRaises(ValueError, numerics.BitString.from_str, '012')
        self.assertRaises(ValueError, numerics.BitString, 4, 2)

    def test_indexing_and_slicing(self):
        bits = numerics.BitString.from_str('10110')
        self.assertEqual(1, bits[0])
        self.assertEqual(0, bits[-1])
        self.assertEqual(numerics.BitString.from_str('011'), bits[1:4])
        self.assertRaises(IndexError, bits.__getitem__, 5)

    def test_concatenation_and_prefix(self):
        head = numerics.BitString.from_str('01')
        tail = numerics.BitString.from_str('001')
        whole = head + tail
        self.assertEqual('01001', str(whole))
        self.assertTrue(whole.startswith(head))
        self.assertTrue(whole.startswith(numerics.BitString()))
        self.assertFalse(whole.startswith(tail))
        self.assertFalse(head.startswith(whole))

    def test_leading_zeros_matter(self):
        self.assertNotEqual(numerics.BitString.from_str('01'),
                            numerics.BitString.from_str('1'))
        self.assertEqual(2, len({numerics.BitString.from_str('01'),
                                 numerics.BitString.from_str('001')}))


class TestUnitInterval(testtools.TestCase):

    def test_validation(self):
        self.assertRaises(exception.InvalidInterval,
                          numerics.UnitInterval, 0, 0)
        self.assertRaises(exception.InvalidInterval,
                          numerics.UnitInterval, F(3, 4), F(1, 2))
        self.assertRaises(exception.InvalidInterval,
                          numerics.UnitInterval, F(-1, 4), F(1, 2))

    def test_membership(self):
        interval = numerics.UnitInterval.from_bounds(F(1, 4), F(3, 4))
        self.assertEqual(F(3, 4), interval.high)
        self.assertEqual(F(1, 2), interval.phi(F(1, 2)))
        self.assertTrue(interval.contains(F(1, 4)))
        self.assertFalse(interval.contains(F(3, 4)))
        self.assertFalse(interval.strictly_contains(F(1, 4)))
        self.assertTrue(interval.strictly_contains(F(1, 2)))

    def test_relations(self):
        outer = numerics.UnitInterval.from_bounds(F(1, 4), F(3, 4))
        inner = numerics.UnitInterval.from_bounds(F(1, 4), F(1, 2))
        apart = numerics.UnitInterval.from_bounds(F(3, 4), 1)
        self.assertTrue(inner.issubset(outer))
        self.assertFalse(outer.issubset(inner))
        self.assertTrue(outer.intersects(inner))
        self.assertFalse(outer.intersects(apart))
        self.assertEqual('[1/4, 3/4)', str(outer))


class TestBinaryIntervals(testtools.TestCase):

    def test_binary_interval(self):
        interval = numerics.binary_interval(
            numerics.BitString.from_str('011'))
        self.assertEqual((F(3, 8), F(1, 8)), tuple(interval))
        self.assertEqual(numerics.UNIT,
                         numerics.binary_interval(numerics.BitString()))

    def test_mbi(self):
        self.assertEqual('010', str(numerics.mbi(
            numerics.UnitInterval(F(1, 4), F(1, 8)))))
        self.assertEqual('', str(numerics.mbi(
            numerics.UnitInterval.from_bounds(F(1, 3), F(2, 3)))))
        self.assertEqual('01', str(numerics.mbi(
            numerics.UnitInterval.from_bounds(F(1, 3), F(1, 2)))))

    def test_mbi_holds_its_interval(self):
        for low, high in [(F(1, 3), F(2, 5)), (F(5, 7), F(6, 7)),
                          (F(0), F(1, 1000)), (F(999, 1000), F(1))]:
            interval = numerics.UnitInterval.from_bounds(low, high)
            bits = numerics.mbi(interval)
            self.assertTrue(interval.issubset(numerics.binary_interval(bits)))

    def test_shortest_dyadic_inside(self):
        interval = numerics.UnitInterval.from_bounds(F(1, 3), F(2, 3))
        self.assertEqual('011', str(numerics.shortest_dyadic_inside(
            interval)))
        self.assertEqual('', str(numerics.shortest_dyadic_inside(
            numerics.UNIT)))
        self.assertEqual('1', str(numerics.shortest_dyadic_inside(
            numerics.UnitInterval.from_bounds(F(1, 2), 1))))

    def test_flush_depth_limit(self):
        self.assertEqual(3, numerics.flush_depth_limit(
            numerics.UnitInterval(0, F(1, 4))))
        for low, high in [(F(1, 3), F(2, 3)), (F(2, 7), F(3, 10))]:
            interval = numerics.UnitInterval.from_bounds(low, high)
            self.assertLessEqual(
                len(numerics.shortest_dyadic_inside(interval)),
                numerics.flush_depth_limit(interval))
