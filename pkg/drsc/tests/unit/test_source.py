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
import math

import numpy as np
import testtools

from drsc.cmd import verify
from drsc import exception
from drsc import source
from drsc.tests import fixtures


HALF = source.SourceModel([F(1, 2), F(1, 2)])
SKEW = source.SourceModel([F(3, 4), F(1, 4)])


class TestSourceModel(testtools.TestCase):

    def test_validation(self):
        self.assertRaises(exception.InvalidSourceModel,
                          source.SourceModel, [F(1)])
        self.assertRaises(exception.InvalidSourceModel,
                          source.SourceModel, [F(1, 2), F(1, 3)])
        self.assertRaises(exception.InvalidSourceModel,
                          source.SourceModel, [F(3, 2), F(-1, 2)])
        self.assertRaises(exception.InvalidSourceModel,
                          source.SourceModel, [0.5, 0.5])
        self.assertRaises(exception.InvalidOrder,
                          source.SourceModel, [F(1, 2), F(1, 2)],
                          order=[0, 0])

    def test_properties(self):
        model = source.SourceModel([F(1, 2), F(0), F(1, 2)])
        self.assertEqual(3, model.size)
        self.assertEqual(F(1, 2), model.pmax)
        self.assertEqual(F(1, 2), model.pmin)
        self.assertTrue(model.is_dyadic)
        self.assertFalse(model.is_degenerate)
        self.assertFalse(source.SourceModel.uniform(3).is_dyadic)
        self.assertFalse(source.SourceModel([F(3, 4), F(1, 4)]).is_dyadic)
        self.assertTrue(source.SourceModel(
            [F(1, 2), F(1, 4), F(1, 8), F(1, 8)]).is_dyadic)
        self.assertTrue(source.SourceModel([F(1), F(0)]).is_degenerate)

    def test_order_and_rank(self):
        model = source.SourceModel([F(1, 2), F(1, 3), F(1, 6)],
                                   order=[2, 0, 1])
        self.assertEqual((1, 2, 0), model.rank)
        self.assertEqual((F(1, 6), F(1, 2), F(1, 3)), model.ordered_pmf())
        self.assertNotEqual(model, model.with_order([0, 1, 2]))

    def test_tokens(self):
        model = source.SourceModel(SKEW.pmf, tokens=['x', 'y'])
        self.assertEqual(1, model.index('y'))
        err = self.assertRaises(exception.UnknownSymbol, model.index, 'z', 4)
        self.assertIn('position 4', err.format_message())
        self.assertRaises(exception.InvalidSourceModel, source.SourceModel,
                          SKEW.pmf, tokens=['x', 'x'])

    def test_product(self):
        product = SKEW.product(2)
        self.assertEqual(((0, 0), (0, 1), (1, 0), (1, 1)),
                         product.components)
        self.assertEqual((F(9, 16), F(3, 16), F(3, 16), F(1, 16)),
                         product.pmf)
        self.assertEqual(('0.0', '0.1', '1.0', '1.1'), product.tokens)
        self.assertRaises(exception.AggregationInfeasible,
                          SKEW.product, 13, 4096)

    def test_product_follows_base_order(self):
        product = SKEW.with_order([1, 0]).product(2)
        self.assertEqual(((1, 1), (1, 0), (0, 1), (0, 0)),
                         product.components)

    def test_type_grouped_order(self):
        product = source.SourceModel.uniform(3).product(2)
        order = product.type_grouped_order()
        classes = [tuple(sorted(product.components[s])) for s in order]
        runs = [c for i, c in enumerate(classes)
                if i == 0 or c != classes[i - 1]]
        self.assertEqual(len(set(classes)), len(runs))
        self.assertEqual(0, order[0])
        self.assertRaises(exception.InvalidOrder, SKEW.type_grouped_order)


class TestPmfFiles(testtools.TestCase):

    def test_parse(self):
        model = source.parse_pmf('# comment\na 1/2\n\nb 1/4  # tail\nc 1/4\n')
        self.assertEqual(('a', 'b', 'c'), model.tokens)
        self.assertEqual((F(1, 2), F(1, 4), F(1, 4)), model.pmf)

    def test_parse_errors(self):
        for text, line, reason in [
                ('a 1/2 x\nb 1/2\n', 1, 'expected'),
                ('a 1/2\nb half\n', 2, 'exact fraction'),
                ('a 1/0\nb 1\n', 1, 'exact fraction'),
                ('a 3/2\nb -1/2\n', 2, 'negative'),
                ('a 1/2\na 1/2\n', 2, 'duplicate'),
                ('a 1\n', 1, 'two symbols'),
                ('a 1/2\nb 1/3\n', 2, 'sum')]:
            err = self.assertRaises(exception.InvalidPmf,
                                    source.parse_pmf, text, 'test.pmf')
            self.assertIn('line %d' % line, err.format_message())
            self.assertIn(reason, err.format_message())

    def test_load_and_format(self):
        files = self.useFixture(fixtures.PmfFiles())
        model = source.load_pmf(files.path('tern'))
        self.assertEqual(fixtures.PMFS['tern'], source.format_pmf(model))


class TestInformationMeasures(testtools.TestCase):

    def test_entropy(self):
        self.assertAlmostEqual(1.0, source.entropy(HALF))
        self.assertAlmostEqual(2.0, source.entropy(
            source.SourceModel.uniform(4)))
        self.assertAlmostEqual(0.811278, source.entropy(SKEW), places=6)

    def test_renyi_entropy(self):
        self.assertAlmostEqual(math.log2(5), source.renyi_entropy(
            source.SourceModel.uniform(5), 2))
        self.assertAlmostEqual(0.678072, source.renyi_entropy(SKEW, 2),
                               places=6)
        self.assertAlmostEqual(1.0, source.renyi_entropy(HALF, 3))
        self.assertRaises(exception.InvalidParameter,
                          source.renyi_entropy, SKEW, 1)
        self.assertRaises(exception.InvalidParameter,
                          source.renyi_entropy, SKEW, 0)

    def test_renyi_below_shannon(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            model = verify.random_model(rng, ceiling=10 ** 9)
            self.assertLessEqual(source.renyi_entropy(model, 2),
                                 source.entropy(model) + 1e-12)

    def test_renyi_variational(self):
        self.assertAlmostEqual(1.0, source.renyi_variational(HALF, 2, 0.005),
                               places=9)
        self.assertAlmostEqual(source.renyi_entropy(SKEW, 2),
                               source.renyi_variational(SKEW, 2, 0.005),
                               delta=1e-3)
        self.assertRaises(exception.InvalidParameter,
                          source.renyi_variational, SKEW, 1, 0.01)
        self.assertRaises(exception.InvalidParameter,
                          source.renyi_variational,
                          source.SourceModel.uniform(5), 2, 0.1)

    def test_renyi_variational_ternary(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            model = verify.random_model(rng, ceiling=10 ** 9, sizes=(3, 3),
                                        weight=4)
            exact = source.renyi_entropy(model, 2)
            grid = source.renyi_variational(model, 2, 0.005)
            self.assertGreaterEqual(grid, exact - 1e-9)
            self.assertLessEqual(grid, exact + 1e-3)

    def test_divergence(self):
        other = source.SourceModel([F(1, 4), F(3, 4)])
        self.assertAlmostEqual(0.0, source.divergence(SKEW, SKEW))
        self.assertAlmostEqual(1 - 0.5 * math.log2(3),
                               source.divergence(HALF, other))
        self.assertEqual(math.inf, source.divergence(
            source.SourceModel([F(1), F(0)]),
            source.SourceModel([F(0), F(1)])))
        self.assertRaises(exception.InvalidSourceModel, source.divergence,
                          HALF, source.SourceModel.uniform(3))

    def test_nu(self):
        other = source.SourceModel([F(1, 4), F(3, 4)])
        self.assertEqual(1, source.nu(SKEW, SKEW))
        self.assertEqual(2, source.nu(HALF, other))
        self.assertEqual(2, source.nu(source.SourceModel([F(1), F(0)]),
                                      HALF))
        self.assertEqual(math.inf, source.nu(HALF, source.SourceModel(
            [F(1), F(0)])))

    def test_nu_at_least_one(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            p = verify.random_model(rng, ceiling=10 ** 9, sizes=(3, 3))
            q = verify.random_model(rng, ceiling=10 ** 9, sizes=(3, 3))
            self.assertGreaterEqual(source.nu(p, q), 1)
            self.assertGreaterEqual(source.divergence(p, q), -1e-12)


class TestSampling(testtools.TestCase):

    def test_empty(self):
        self.assertEqual([], source.sample(SKEW, 0, 1))
        self.assertRaises(exception.InvalidParameter,
                          source.sample, SKEW, -1, 1)

    def test_replay(self):
        model = source.SourceModel.uniform(20)
        self.assertEqual(source.sample(model, 500, 9),
                         source.sample(model, 500, 9))
        self.assertNotEqual(source.sample(model, 500, 9),
                            source.sample(model, 500, 10))

    def test_zero_probability_never_drawn(self):
        model = source.SourceModel([F(1, 2), F(0), F(1, 2)])
        self.assertNotIn(1, source.sample(model, 2000, 3))

    def test_empirical_type(self):
        model = source.SourceModel([F(1, 2), F(1, 4), F(1, 4)])
        n = 100000
        counts = source.type_of(source.sample(model, n, 5), 3).counts
        for count, p in zip(counts, model.pmf):
            sigma = math.sqrt(n * float(p) * (1 - float(p)))
            self.assertLess(abs(count - n * float(p)), 4 * sigma)


class TestTypes(testtools.TestCase):

    def test_type_of(self):
        vector = source.type_of([0, 0, 1], 2)
        self.assertEqual((2, 1), vector.counts)
        self.assertEqual((F(2, 3), F(1, 3)), vector.frequencies())
        self.assertEqual(F(2, 3), vector.as_model().pmax)
        self.assertRaises(exception.UnknownSymbol, source.type_of, [0, 2], 2)
        self.assertRaises(exception.InvalidParameter,
                          source.type_of([], 2).frequencies)

    def test_type_counting(self):
        for n in range(1, 7):
            for size in (2, 3):
                types = list(source.enumerate_types(n, size))
                self.assertLessEqual(len(types), (n + 1) ** size)
                self.assertEqual(size ** n, sum(
                    source.type_class_size(t.counts) for t in types))

    def test_sequence_probability_from_type(self):
        model = source.SourceModel([F(1, 2), F(1, 3), F(1, 6)])
        x = [0, 1, 1, 2, 0, 0]
        counts = source.type_of(x, 3).counts
        expected = math.prod(p ** c for p, c in zip(model.pmf, counts))
        self.assertEqual(expected, source.sequence_probability(model, x))
        self.assertEqual(F(1, 432), expected)
