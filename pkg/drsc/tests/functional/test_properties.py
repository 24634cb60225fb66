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
"""End to end properties of the delay codec and the bound estimators at
sizes that run in a few seconds each.
"""

from fractions import Fraction
import math

import numpy as np

from drsc.analysis import bounds
from drsc.analysis import estimate
from drsc.cmd import verify
from drsc import container
from drsc import delay_codec
from drsc import source
from drsc.tests.functional import base


UNIFORM20 = source.SourceModel.uniform(20)


class TestDelayCodec(base.TestCase):

    def test_random_configurations_roundtrip_within_budget(self):
        rng = np.random.default_rng(2024)
        for trial in range(10):
            model = verify.random_model(rng, 4096)
            k = delay_codec.aggregation_for(model.pmax)
            d = max(k - 1, 1) + int(rng.integers(0, 4))
            extended = delay_codec.build_extended_model(model, d)
            symbols = source.sample(model, 1000, [2024, trial])
            header, bits, ledger = delay_codec.dc_encode(extended, symbols)
            header, bits = container.unpack(container.pack(header, bits))
            self.assertEqual(symbols, delay_codec.dc_decode(header, bits,
                                                            model))
            self.assertLessEqual(ledger.max_delay, d)

    def test_uniform20_hard_delay(self):
        # 102000 positions over 51 streams.
        for d in (2, 4, 6):
            extended = delay_codec.build_extended_model(UNIFORM20, d)
            for index in range(17):
                delays = delay_codec.online_delay_trace(
                    extended, source.sample(UNIFORM20, 2000, [d, index]))
                self.assertEqual(2000, len(delays))
                self.assertLessEqual(max(delays), d)


class TestDelayTail(base.TestCase):

    def test_matched_dyadic_tail(self):
        tern = source.SourceModel(
            [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])
        result = estimate.estimate_delay_tail(tern, tern, 16, 100000, 200, 1)
        estimate.check_tail(result)
        self.assertEqual(16, len(result.rows))
        self.assertEqual(0, sum(row.exceedances for row in result.rows))

    def test_matched_tail_of_a_non_dyadic_source(self):
        model = source.SourceModel.uniform(3)
        result = estimate.estimate_delay_tail(model, model, 6, 4000, 80, 6)
        estimate.check_tail(result)
        rates = [row.p_hat for row in result.rows]
        self.assertEqual(sorted(rates, reverse=True), rates)


class TestRedundancy(base.TestCase):

    def test_redundancy_decays_with_delay(self):
        ds = [1, 2, 3, 4]
        results = [estimate.estimate_redundancy(UNIFORM20, d, 4, 2500, d)
                   for d in ds]
        for result in results:
            estimate.check_redundancy(result)
            self.assertGreaterEqual(result.combined, result.mismatch_term)
        self.assertGreater(results[0].combined, results[1].combined)
        slope = estimate.decay_slope(ds, [r.combined for r in results])
        self.assertLessEqual(slope, -0.5 * math.log2(20))

    def test_exact_decomposition(self):
        # All 8000 strings of length 3.
        result = estimate.exact_decomposition(UNIFORM20, 3, 3)
        self.assertAlmostEqual(result.exact, result.decomposed)
        self.assertLessEqual(result.operational, result.exact + 1e-9)
        sampled = estimate.estimate_redundancy(UNIFORM20, 3, 4, 1000, 3)
        self.assertAlmostEqual(sampled.mismatch_term, result.mismatch_term)
        self.assertLessEqual(sampled.mismatch_term, result.exact + 1e-12)
        self.assertLessEqual(result.exact, sampled.combined_ci_hi)
        self.assertLess(result.exact, bounds.redundancy_delay_bound(
            UNIFORM20, 3))


class TestExponents(base.TestCase):

    def test_exponent_ordering_on_random_models(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            model = verify.random_model(rng, 10 ** 9)
            summary = bounds.exponent_summary(model)
            self.assertLessEqual(summary.lower_pmax,
                                 summary.lower_renyi + 1e-12)

    def test_renyi_variational_on_random_ternary_models(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            model = verify.random_model(rng, 10 ** 9, sizes=(3, 3), weight=4)
            self.assertAlmostEqual(source.renyi_entropy(model, 2),
                                   source.renyi_variational(model, 2, 0.005),
                                   delta=1e-3)
