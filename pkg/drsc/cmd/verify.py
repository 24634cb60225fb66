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
"""Randomized property suites behind ``drsc-manage verify``."""

from fractions import Fraction

import numpy as np
from oslo_log import log as logging
from oslo_upgradecheck import upgradecheck
import prettytable

from drsc import codec
from drsc import container
from drsc import delay_codec
from drsc import exception
from drsc import geometry
from drsc import numerics
from drsc import source


LOG = logging.getLogger(__name__)

BRUTE_FORCE_DEPTH = 40

_RESULT_NAMES = {
    upgradecheck.Code.SUCCESS: 'Success',
    upgradecheck.Code.WARNING: 'Warning',
    upgradecheck.Code.FAILURE: 'Failure',
}


def random_model(rng, ceiling, sizes=(2, 8), weight=12):
    """A random model whose aggregated alphabet stays under ``ceiling``."""
    while True:
        size = int(rng.integers(sizes[0], sizes[1], endpoint=True))
        weights = rng.integers(1, weight, size=size, endpoint=True)
        total = int(weights.sum())
        model = source.SourceModel([Fraction(int(w), total)
                                    for w in weights])
        k = delay_codec.aggregation_for(model.pmax)
        if size ** k <= ceiling:
            return model


def random_interval(rng, max_denominator=1024):
    den = int(rng.integers(2, max_denominator, endpoint=True))
    low, high = sorted(rng.choice(den + 1, size=2, replace=False).tolist())
    return numerics.UnitInterval.from_bounds(Fraction(low, den),
                                             Fraction(high, den))


def brute_force_forbidden(host, query, depth=BRUTE_FORCE_DEPTH):
    """Forbidden points strictly inside ``query`` from chains cut at depth."""
    center = geometry.midpoint_of_mbi(host)
    points = [center]
    for step in (geometry.left_adjacent, geometry.right_adjacent):
        point = center
        for _ in range(depth):
            point = step(host, point)
            if point is None:
                break
            points.append(point)
    return sorted(p for p in points if query.strictly_contains(p))


class Checks(upgradecheck.UpgradeCommands):
    """Property suites for ``drsc-manage verify``.

    Each suite is a method returning an upgradecheck Result and is listed
    in _upgrade_checks. Any failure makes the command exit with 3.
    """

    def __init__(self, config, seed=0, trials=100, length=200):
        self.config = config
        self.seed = seed
        self.trials = trials
        self.length = length

    def _rng(self, suite):
        return np.random.default_rng([self.seed, suite])

    @property
    def _aggregation_ceiling(self):
        return self.config.codec.aggregation_ceiling

    @property
    def _precision_ceiling(self):
        return self.config.codec.precision_ceiling

    def _failure(self, err):
        LOG.error('Property suite failed: %s', err.format_message())
        return upgradecheck.Result(upgradecheck.Code.FAILURE,
                                   details=err.format_message())

    def _check_roundtrip(self):
        """Encode, pack, unpack and decode random streams."""
        rng = self._rng(0)
        try:
            for trial in range(self.trials):
                model = random_model(rng, self._aggregation_ceiling)
                k = delay_codec.aggregation_for(model.pmax)
                d = max(k - 1, 1) + int(rng.integers(0, 4))
                extended = delay_codec.build_extended_model(
                    model, d, self._aggregation_ceiling)
                symbols = source.sample(model, self.length, [self.seed,
                                                             trial])
                header, bits, _ledger = delay_codec.dc_encode(
                    extended, symbols, self._precision_ceiling)
                header, bits = container.unpack(container.pack(header, bits))
                decoded = delay_codec.dc_decode(
                    header, bits, model, self._aggregation_ceiling,
                    self._precision_ceiling)
                if decoded != symbols:
                    raise exception.CodecInvariantViolated(
                        reason='roundtrip mismatch for trial %d' % trial)
        except exception.PropertyViolation as err:
            return self._failure(err)
        return upgradecheck.Result(upgradecheck.Code.SUCCESS)

    def _check_hard_delay(self):
        """Every position of a uniform-20 stream decodes within d."""
        model = source.SourceModel.uniform(20)
        try:
            for d in (2, 4, 6):
                extended = delay_codec.build_extended_model(model, d)
                symbols = source.sample(model, self.length * 5,
                                        [self.seed, d])
                ledger = delay_codec.dc_encode(
                    extended, symbols, self._precision_ceiling)[2]
                if len(ledger.delays) != len(symbols):
                    raise exception.CodecInvariantViolated(
                        reason='%d delays traced for %d symbols'
                               % (len(ledger.delays), len(symbols)))
                if ledger.max_delay > d:
                    raise exception.NotDelayConstrained(
                        d=d, prefix='<stream>',
                        reason='observed delay %d' % ledger.max_delay)
        except exception.PropertyViolation as err:
            return self._failure(err)
        return upgradecheck.Result(upgradecheck.Code.SUCCESS)

    def _check_fictitious_placement(self):
        """Fictitious offsets and real-symbol order of random models."""
        rng = self._rng(2)
        try:
            for _ in range(self.trials):
                model = random_model(rng, self._aggregation_ceiling)
                k = delay_codec.aggregation_for(model.pmax)
                extended = delay_codec.build_extended_model(
                    model, max(k - 1, 1) + int(rng.integers(0, 6)),
                    self._aggregation_ceiling)
                extended.verify_placement()
                reals = [s for s in extended.map.symbols
                         if extended.is_real(s)]
                if reals != sorted(reals):
                    raise exception.CodecInvariantViolated(
                        reason='extended order does not preserve the base '
                               'order')
        except exception.PropertyViolation as err:
            return self._failure(err)
        return upgradecheck.Result(upgradecheck.Code.SUCCESS)

    def _check_delta_set_size(self):
        """|S_delta| stays within 1 + 2 log2(width / delta)."""
        rng = self._rng(3)
        for _ in range(self.trials * 100):
            host = random_interval(rng)
            delta = host.width * Fraction(
                int(rng.integers(1, 999)), 1000)
            size = len(geometry.adjacent_delta_set(host, delta))
            limit = geometry.delta_set_size_bound(host, delta)
            if size > limit:
                return upgradecheck.Result(
                    upgradecheck.Code.FAILURE,
                    details='%d points in S_delta of %s for delta %s, '
                            'above %.3f' % (size, host, delta, limit))
        return upgradecheck.Result(upgradecheck.Code.SUCCESS)

    def _check_forbidden_free_side(self):
        """The chosen fictitious region holds no forbidden point."""
        rng = self._rng(4)
        try:
            for _ in range(self.trials * 100):
                host = random_interval(rng)
                side = geometry.forbidden_free_side(host)
                regions = geometry.lr_subintervals(host)
                region = regions.left if side == geometry.LEFT else (
                    regions.right)
                found = brute_force_forbidden(host, region)
                if found:
                    raise exception.CodecInvariantViolated(
                        reason='side %s of %s holds forbidden points %s'
                               % (side, host, found))
        except exception.PropertyViolation as err:
            return self._failure(err)
        return upgradecheck.Result(upgradecheck.Code.SUCCESS)

    def _check_gim_representation(self):
        """Interval-union representation of the K=3, d=2 delay codec."""
        rng = self._rng(5)
        model = source.SourceModel.uniform(3)
        extended = delay_codec.build_extended_model(model, 2)

        def output(symbols):
            return delay_codec.encoder_output(extended, symbols)

        try:
            for _ in range(self.trials):
                blocks = int(rng.integers(0, 2, endpoint=True))
                prefix = rng.integers(0, 3, size=blocks * extended.k)
                codec.gim_representation(output, prefix.tolist(), 2, 3)
        except exception.PropertyViolation as err:
            return self._failure(err)
        return upgradecheck.Result(upgradecheck.Code.SUCCESS)

    _upgrade_checks = (
        ('roundtrip', _check_roundtrip),
        ('hard delay', _check_hard_delay),
        ('fictitious placement', _check_fictitious_placement),
        ('delta set size', _check_delta_set_size),
        ('forbidden-free side', _check_forbidden_free_side),
        ('gim representation', _check_gim_representation),
    )

    @classmethod
    def suite_names(cls):
        return [name for name, _func in cls._upgrade_checks]

    def check(self):
        """Run every suite, print one row per suite, return the worst code."""
        worst = upgradecheck.Code.SUCCESS
        table = prettytable.PrettyTable(['Suite', 'Result', 'Details'])
        table.align = 'l'
        for name, func in self._upgrade_checks:
            result = func(self)
            worst = max(worst, result.code)
            table.add_row([name, _RESULT_NAMES[result.code],
                           result.details or ''])
        print('Property Suite Results')
        print(table)
        return worst
