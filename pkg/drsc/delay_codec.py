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
"""Arithmetic coding with a hard decoding delay.

Source symbols are grouped into super-symbols of k until the largest
super-symbol probability is below 1/16, then coded with a mismatched map
that reserves mass epsilon for each of two fictitious symbols, x_L just
past 3/8 of every interval and x_R just past 1/2. The encoder runs a
decoder on its own output. Whenever d~ + 1 real super-symbols are still
undecodable it encodes whichever fictitious symbol keeps clear of the
forbidden points of the current interval, which makes every real symbol so
far decodable. The decoder drops fictitious symbols as it meets them.
"""

import collections
from fractions import Fraction

import numpy as np
from oslo_log import log as logging

from drsc import codec
from drsc import container
from drsc import exception
from drsc import geometry
from drsc import numerics
from drsc import source


LOG = logging.getLogger(__name__)

_SIXTEENTH = Fraction(1, 16)
_EPSILON_CAP = Fraction(1, 32)
_LEFT_SPLICE = Fraction(3, 8)
_RIGHT_SPLICE = Fraction(1, 2)
_LEFT_LIMIT = Fraction(1, 2)
_RIGHT_LIMIT = Fraction(5, 8)


def aggregation_for(pmax):
    """Smallest k >= 1 with pmax**k < 1/16."""
    if pmax >= 1:
        raise exception.InvalidSourceModel(
            reason='a deterministic source cannot be aggregated')
    k = 1
    power = pmax
    while power >= _SIXTEENTH:
        power *= pmax
        k += 1
    return k


def splice_fictitious(probabilities, epsilon):
    """Coding order of real symbols 0..N-1 with x_L and x_R spliced in.

    ``probabilities`` are real coding probabilities in order. Returns the
    symbol list (x_L is N and x_R is N + 1) and the offsets of x_L and
    x_R.
    """
    left, right = len(probabilities), len(probabilities) + 1
    symbols = []
    offset = Fraction(0)
    left_at = right_at = None
    for symbol, prob in enumerate(probabilities):
        if left_at is None and offset >= _LEFT_SPLICE:
            left_at = offset
            symbols.append(left)
            offset += epsilon
        if left_at is not None and right_at is None and (
                offset >= _RIGHT_SPLICE):
            right_at = offset
            symbols.append(right)
            offset += epsilon
        symbols.append(symbol)
        offset += prob
    if left_at is None or right_at is None:
        raise exception.CodecInvariantViolated(
            reason='fictitious symbols could not be spliced')
    return symbols, left_at, right_at


class ExtendedModel(object):
    """Coding model with aggregation and the two fictitious symbols.

    Real super-symbols are numbered 0..N-1 in lexicographic order of
    their base ranks; ``left`` and ``right`` are x_L and x_R.
    """

    def __init__(self, base, d, aggregation_ceiling=None):
        if d < 1:
            raise exception.InvalidParameter(
                name='delay budget', value=d, reason='must be at least 1')
        self.base = base
        self.d = d
        self.k = aggregation_for(base.pmax)
        self.effective_delay = (d + 1) // self.k - 1
        if self.effective_delay < 0:
            raise exception.DelayBudgetTooSmall(
                d=d, k=self.k, minimal=max(self.k - 1, 1))

        self.super_model = base.product(self.k, aggregation_ceiling)
        self.components = self.super_model.components
        self.super_index = {c: i for i, c in enumerate(self.components)}
        self.pad_symbol = base.order[0]

        pmax, pmin = self.super_model.pmax, self.super_model.pmin
        self.epsilon = min(pmax ** self.effective_delay, _EPSILON_CAP,
                           pmin / 2)
        self.clamped = self.epsilon != pmax ** self.effective_delay

        real = [(1 - 2 * self.epsilon) * p for p in self.super_model.pmf]
        count = len(real)
        self.left, self.right = count, count + 1
        symbols, self.left_offset, self.right_offset = splice_fictitious(
            real, self.epsilon)
        probs = dict(enumerate(real))
        probs[self.left] = probs[self.right] = self.epsilon
        self.map = codec.ArithmeticMap(symbols, [probs[s] for s in symbols])
        self.verify_placement()
        LOG.debug('Extended model: k=%d, effective delay %d, epsilon %s%s',
                  self.k, self.effective_delay, self.epsilon,
                  ' (clamped)' if self.clamped else '')

    @property
    def real_count(self):
        return self.left

    def is_real(self, symbol):
        return symbol < self.left

    def verify_placement(self):
        eps = self.epsilon
        if max(self.map.probability[s] for s in range(self.real_count)) >= (
                _SIXTEENTH):
            raise exception.CodecInvariantViolated(
                reason='a real coding probability reaches 1/16')
        if not eps < _SIXTEENTH:
            raise exception.CodecInvariantViolated(
                reason='epsilon %s is not below 1/16' % eps)
        if not _LEFT_SPLICE <= self.left_offset <= _LEFT_LIMIT - eps:
            raise exception.CodecInvariantViolated(
                reason='x_L offset %s outside [3/8, 1/2 - eps]'
                       % self.left_offset)
        if not _RIGHT_SPLICE <= self.right_offset <= _RIGHT_LIMIT - eps:
            raise exception.CodecInvariantViolated(
                reason='x_R offset %s outside [1/2, 5/8 - eps]'
                       % self.right_offset)

    def header(self, length):
        return container.StreamHeader(self.base.ordered_pmf(), self.d, length)


def build_extended_model(p, d, aggregation_ceiling=None):
    return ExtendedModel(p, d, aggregation_ceiling)


class DelayLedger(object):
    """Bookkeeping of the encoder's emulated decoder.

    Counts are in source symbols except ``super_steps``, the number of real
    super-symbols encoded. ``delays`` holds the per-position delay once a
    position becomes decodable.
    """

    def __init__(self):
        self.consumed = 0
        self.decodable = 0
        self.super_steps = 0
        self.insertions = 0
        self.delays = []

    @property
    def max_delay(self):
        return max(self.delays, default=0)

    def __repr__(self):
        return ('DelayLedger(consumed=%d, decodable=%d, insertions=%d, '
                'max_delay=%d)' % (self.consumed, self.decodable,
                                   self.insertions, self.max_delay))


class DelayEncoder(object):
    """Streaming encoder enforcing the delay budget of its model."""

    def __init__(self, model, precision_ceiling=None):
        self.model = model
        self.encoder = codec.Encoder(model.map, precision_ceiling)
        self._mirror = codec.Decoder(model.map, precision_ceiling)
        self.ledger = DelayLedger()
        self._buffer = []
        self._decodable_super = 0
        self._length = None

    @property
    def output(self):
        return self.encoder.output

    @property
    def measure(self):
        return self.encoder.measure

    def push(self, symbol):
        if not 0 <= symbol < self.model.base.size:
            raise exception.UnknownSymbol(symbol=symbol,
                                          position=self.ledger.consumed)
        self._buffer.append(symbol)
        self.ledger.consumed += 1
        if len(self._buffer) == self.model.k:
            self._encode_super(self.model.super_index[tuple(self._buffer)])
            self._buffer = []

    def _emit(self, symbol):
        bits = self.encoder.encode_step(symbol)
        decoded = self._mirror.feed(bits, limit=self.encoder.consumed)
        step = self.ledger.super_steps - 1
        for symbol in decoded:
            if self.model.is_real(symbol):
                self._settle(self._decodable_super, step)
                self._decodable_super += 1

    def _settle(self, index, step):
        k = self.model.k
        base = index * k
        for r in range(k):
            if base + r >= len(self.ledger.delays):
                self.ledger.delays.append((step - index) * k + (k - 1 - r))
        self.ledger.decodable = min(base + k, self.ledger.consumed)

    def _encode_super(self, symbol):
        self.ledger.super_steps += 1
        self._emit(symbol)
        pending = self.ledger.super_steps - self._decodable_super
        if pending == self.model.effective_delay + 1:
            self._insert()
        elif pending > self.model.effective_delay + 1:
            raise exception.CodecInvariantViolated(
                reason='%d super-symbols pending past the delay budget'
                       % pending)

    def _insert(self):
        interval = self.encoder.interval
        side = geometry.forbidden_free_side(interval)
        fictitious = (self.model.left if side == geometry.LEFT
                      else self.model.right)
        region = self.model.map.subinterval(interval, fictitious)
        if geometry.forbidden_points_in(interval, region):
            raise exception.CodecInvariantViolated(
                reason='fictitious interval %s meets a forbidden point of %s'
                       % (region, interval))
        self.ledger.insertions += 1
        self._emit(fictitious)
        if self._decodable_super != self.ledger.super_steps:
            raise exception.CodecInvariantViolated(
                reason='delay not nullified after an insertion at '
                       'super-step %d' % self.ledger.super_steps)

    def finish(self):
        """Pad the last super-symbol, flush and settle every position."""
        self._length = self.ledger.consumed
        if self._buffer:
            while len(self._buffer) < self.model.k:
                self._buffer.append(self.model.pad_symbol)
            self._encode_super(self.model.super_index[tuple(self._buffer)])
            self._buffer = []
        self.encoder.flush()
        length = self._length
        delays = self.ledger.delays[:length]
        for i in range(len(delays), length):
            delays.append(length - 1 - i)
        self.ledger.delays = [min(delay, length - 1 - i)
                              for i, delay in enumerate(delays)]
        self.ledger.consumed = self.ledger.decodable = length
        return self.output


def dc_encode(model, symbols, precision_ceiling=None):
    """Encode base symbol indices; returns (header, bits, ledger)."""
    encoder = DelayEncoder(model, precision_ceiling)
    for symbol in symbols:
        encoder.push(symbol)
    bits = encoder.finish()
    ledger = encoder.ledger
    LOG.debug('Encoded %d symbols into %d bits with %d insertions',
              ledger.consumed, bits.length, ledger.insertions)
    return model.header(ledger.consumed), bits, ledger


def dc_decode(header, bits, model=None, aggregation_ceiling=None,
              precision_ceiling=None):
    """Decode a payload back to base symbols.

    Without ``model`` the result is base-order ranks; with it, ranks are
    mapped back to the model's symbol indices.
    """
    extended = ExtendedModel(source.SourceModel(header.pmf), header.d,
                             aggregation_ceiling)
    needed = -(-header.length // extended.k)
    decoder = codec.Decoder(extended.map, precision_ceiling)
    decoder.feed(bits, limit=0)
    ranks = []
    found = 0
    while found < needed:
        out = decoder.feed((), limit=decoder.decoded + 1)
        if not out:
            raise exception.CorruptStream(
                decoded=min(len(ranks), header.length),
                expected=header.length, position=decoder.pulled)
        symbol = out[0]
        if extended.is_real(symbol):
            ranks.extend(extended.components[symbol])
            found += 1
    ranks = ranks[:header.length]
    if model is None:
        return ranks
    return [model.order[r] for r in ranks]


def online_delay_trace(model, symbols, precision_ceiling=None):
    """Per-position delays, in source symbols, of one encoded stream."""
    return dc_encode(model, symbols, precision_ceiling)[2].delays


def _complete_prefix(model, symbols, precision_ceiling):
    encoder = DelayEncoder(model, precision_ceiling)
    whole = len(symbols) - len(symbols) % model.k
    for symbol in symbols[:whole]:
        encoder.push(symbol)
    return encoder


def encoder_output(model, symbols, precision_ceiling=None):
    """E(s): bits emitted after every complete super-symbol of ``symbols``.

    Insertions triggered by those super-symbols are included; nothing is
    flushed.
    """
    return _complete_prefix(model, symbols, precision_ceiling).output


def extended_measure(model, symbols, precision_ceiling=None):
    """mu(s): width of the interval after the complete super-symbols."""
    return _complete_prefix(model, symbols, precision_ceiling).measure


def measure_identity(model, symbols, insertions):
    """(1 - 2 eps)^steps * P^k(reals) * eps^insertions for a traced run."""
    eps = model.epsilon
    whole = len(symbols) - len(symbols) % model.k
    steps = whole // model.k
    prob = source.sequence_probability(model.base, symbols[:whole])
    return (1 - 2 * eps) ** steps * prob * eps ** insertions


def make_rotated_order(p_super, pivot):
    """Rotate the order of ``p_super`` cyclically so ``pivot`` comes first.

    The order must keep each type class contiguous when the model carries
    its components.
    """
    order = p_super.order
    if pivot not in order:
        raise exception.InvalidOrder(
            reason='pivot %s is not a super-symbol' % pivot)
    if p_super.components is not None:
        seen, last = set(), None
        for symbol in order:
            key = tuple(sorted(p_super.components[symbol]))
            if key != last:
                if key in seen:
                    raise exception.InvalidOrder(
                        reason='type classes are not contiguous')
                seen.add(key)
                last = key
    at = order.index(pivot)
    return order[at:] + order[:at]


EnsembleEstimate = collections.namedtuple(
    'EnsembleEstimate', 'trials hits rate renyi_reference seed')


class RotatedEnsemble(object):
    """Offsets of every super-symbol under every rotation of the order.

    Coding uses P^d with mass epsilon = min(pmax^d, 1/32) held back for the
    fictitious symbols, spliced the same way the delay codec splices them.
    """

    def __init__(self, p, d, ensemble_ceiling=None):
        size = p.size ** d
        if ensemble_ceiling is not None and size > ensemble_ceiling:
            raise exception.EnsembleInfeasible(size=size,
                                               ceiling=ensemble_ceiling)
        self.base = p
        self.d = d
        product = p.product(d)
        self.super_model = product.with_order(product.type_grouped_order())
        self.epsilon = min(product.pmax, _EPSILON_CAP)
        self.real_mass = 1 - 2 * self.epsilon
        self._cumulative = {}
        offset = Fraction(0)
        for symbol in self.super_model.order:
            self._cumulative[symbol] = offset
            offset += self.real_mass * product.pmf[symbol]

    def interval(self, pivot, symbol):
        """Interval of ``symbol`` when the order starts at ``pivot``."""
        eps = self.epsilon
        offset = self._cumulative[symbol] - self._cumulative[pivot]
        if offset < 0:
            offset += self.real_mass
        start = offset
        if offset >= _LEFT_SPLICE:
            start += eps
        if offset >= _RIGHT_SPLICE - eps:
            start += eps
        width = self.real_mass * self.super_model.pmf[symbol]
        return numerics.UnitInterval(start, width)

    def hit(self, pivot, symbol, point):
        return self.interval(pivot, symbol).contains(point)


def ensemble_simulate(p, d, trials, seed, point=numerics.HALF,
                      ensemble_ceiling=None):
    """Monte Carlo hit rate of ``point`` under random rotations.

    Pivots and symbols come from two streams derived from ``seed``, so an
    encoder and decoder sharing the seed see the same pivots.
    """
    ensemble = RotatedEnsemble(p, d, ensemble_ceiling)
    point = numerics.as_rational(point)
    pivots = source.Sampler(ensemble.super_model, [seed, 0]).draw(trials)
    symbols = source.Sampler(ensemble.super_model, [seed, 1]).draw(trials)
    hits = sum(1 for pivot, symbol in zip(pivots, symbols)
               if ensemble.hit(pivot, symbol, point))
    reference = 2.0 ** (-d * source.renyi_entropy(p, 2))
    LOG.info('Ensemble d=%d: %d hits in %d trials', d, hits, trials)
    return EnsembleEstimate(trials, hits, hits / trials if trials else 0.0,
                            reference, seed)


def seeded_stream(model, length, seed):
    """A reproducible i.i.d. stream of base symbols."""
    return source.Sampler(model, np.random.default_rng(seed)).draw(length)
