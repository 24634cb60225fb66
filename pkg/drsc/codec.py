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
"""Exact interval-mapping arithmetic encoder and decoder.

The coder state is an integer frame ``(low, width, scale)`` standing for
the interval [low/scale, (low + width)/scale) relative to the bits emitted
so far: emitting a bit doubles the frame about the half it lies in. Only
common factors of two are ever cancelled, so no gcd is taken per symbol.
Denominators of a non-dyadic model are irreducible, which makes the frame
grow by about log2 of the model's common denominator per symbol; the
precision ceiling bounds that growth.
"""

import bisect
import collections
from fractions import Fraction
import itertools
import math

from oslo_log import log as logging

from drsc.conf import codec as codec_conf
from drsc import exception
from drsc import numerics


LOG = logging.getLogger(__name__)

Censored = collections.namedtuple('Censored', 'horizon')


def _common_twos(*values):
    merged = 0
    for value in values:
        merged |= value
    return (merged & -merged).bit_length() - 1


class ArithmeticMap(object):
    """Cumulative offsets f1 of a coding distribution under an order.

    ``symbols`` lists the symbols in coding order. Zero-probability symbols
    are holes: they keep an offset but can be neither encoded nor decoded.
    """

    def __init__(self, symbols, probabilities):
        symbols = tuple(symbols)
        probabilities = [numerics.as_rational(p) for p in probabilities]
        if len(symbols) != len(probabilities) or len(set(symbols)) != len(
                symbols):
            raise exception.InvalidSourceModel(
                reason='need one probability per distinct symbol')
        if any(p < 0 for p in probabilities) or sum(probabilities) != 1:
            raise exception.InvalidSourceModel(
                reason='coding probabilities must be a pmf')

        self.symbols = symbols
        self.probability = dict(zip(symbols, probabilities))
        self.cumulative = {}
        offset = Fraction(0)
        for symbol, prob in zip(symbols, probabilities):
            self.cumulative[symbol] = offset
            offset += prob

        self.scale = math.lcm(*(p.denominator for p in probabilities))
        self.scaled = {
            s: (int(self.cumulative[s] * self.scale),
                int(self.probability[s] * self.scale))
            for s in symbols}
        self._decodable = [s for s in symbols if self.probability[s] > 0]
        self._starts = [self.scaled[s][0] for s in self._decodable]

    @classmethod
    def from_model(cls, model):
        return cls(model.order, model.ordered_pmf())

    def subinterval(self, interval, symbol):
        return numerics.UnitInterval(
            interval.phi(self.cumulative[symbol]),
            interval.width * self.probability[symbol])

    def interval_of(self, sequence):
        """I(x^n), the true interval of a whole sequence."""
        interval = numerics.UNIT
        for symbol in sequence:
            interval = self.subinterval(interval, symbol)
        return interval

    def measure(self, sequence):
        """mu_n(x^n) = Q(x_1) ... Q(x_n)."""
        return math.prod((self.probability[s] for s in sequence),
                         start=Fraction(1))

    def locate(self, offset):
        """The positive-probability symbol whose scaled range holds offset."""
        return self._decodable[bisect.bisect_right(self._starts, offset) - 1]


def make_arithmetic(model):
    return ArithmeticMap.from_model(model)


def induced_measure(amap, sequence):
    return amap.measure(sequence)


class _Frame(object):

    def __init__(self, amap, precision_ceiling=None):
        self.map = amap
        self.precision_ceiling = (
            precision_ceiling or codec_conf.DEFAULT_PRECISION_CEILING)
        self._low = 0
        self._width = 1
        self._scale = 1

    @property
    def interval(self):
        """The current interval in the rescaled frame."""
        return numerics.UnitInterval(Fraction(self._low, self._scale),
                                     Fraction(self._width, self._scale))

    def _narrow(self, symbol):
        start, size = self.map.scaled[symbol]
        m = self.map.scale
        self._low = self._low * m + self._width * start
        self._width *= size
        self._scale *= m

    def _cancel(self, consumed):
        shift = _common_twos(self._low, self._width, self._scale)
        if shift:
            self._low >>= shift
            self._width >>= shift
            self._scale >>= shift
        bits = self._scale.bit_length()
        if bits > self.precision_ceiling:
            raise exception.PrecisionCeilingExceeded(
                bits=bits, consumed=consumed, ceiling=self.precision_ceiling)


class Encoder(_Frame):
    """Encodes one stream, emitting the mbi of the interval after each step.

    ``output`` only ever grows by extension, and after every step it
    equals mbi of the true interval.
    """

    def __init__(self, amap, precision_ceiling=None):
        super(Encoder, self).__init__(amap, precision_ceiling)
        self._bits = bytearray()
        self.consumed = 0
        self.flushed = False

    @property
    def emitted(self):
        return len(self._bits)

    @property
    def output(self):
        return numerics.BitString.from_bits(self._bits)

    @property
    def measure(self):
        """Width of the true interval."""
        return Fraction(self._width, self._scale << self.emitted)

    @property
    def true_interval(self):
        shift = 1 << self.emitted
        prefix = self.output.value
        return numerics.UnitInterval(
            (prefix + Fraction(self._low, self._scale)) / shift,
            Fraction(self._width, self._scale) / shift)

    def encode_step(self, symbol):
        """Narrow to ``symbol`` and return the newly emitted bits."""
        if self.flushed:
            raise exception.CodecInvariantViolated(
                reason='encode after flush')
        try:
            size = self.map.scaled[symbol][1]
        except KeyError:
            raise exception.UnknownSymbol(symbol=symbol,
                                          position=self.consumed)
        if not size:
            raise exception.ZeroProbabilitySymbol(symbol=symbol)
        mark = len(self._bits)
        self._narrow(symbol)
        self.consumed += 1
        self._renormalize()
        return numerics.BitString.from_bits(self._bits[mark:])

    def _renormalize(self):
        low, width, scale = self._low, self._width, self._scale
        bits = self._bits
        while True:
            if 2 * (low + width) <= scale:
                bits.append(0)
                low <<= 1
            elif 2 * low >= scale:
                bits.append(1)
                low = 2 * low - scale
            else:
                break
            width <<= 1
        self._low, self._width = low, width
        self._cancel(self.consumed)

    def flush(self):
        """Append the leftmost shortest dyadic interval inside the frame."""
        tail = numerics.shortest_dyadic_inside(self.interval)
        self._bits.extend(tail)
        self.flushed = True
        return tail


class Decoder(_Frame):
    """Greedy decoder mirroring an Encoder frame.

    Received bits are pulled into a window ``[value/2**t, (value+1)/2**t)``
    of the frame only as far as needed; a symbol is output once the window
    lies inside its subinterval.
    """

    def __init__(self, amap, precision_ceiling=None):
        super(Decoder, self).__init__(amap, precision_ceiling)
        self._pending = collections.deque()
        self._value = 0
        self._depth = 0
        self.received = 0
        self.pulled = 0
        self.decoded = 0

    def feed(self, bits, limit=None):
        """Take more bits and return every symbol they make decodable.

        ``limit`` caps the total number of decoded symbols.
        """
        self._pending.extend(bits)
        self.received += len(bits)
        out = []
        while limit is None or self.decoded < limit:
            symbol = self._try_decode(limit)
            if symbol is not None:
                out.append(symbol)
                continue
            if not self._pending:
                break
            self._value = (self._value << 1) | self._pending.popleft()
            self._depth += 1
            self.pulled += 1
        return out

    def _try_decode(self, limit):
        value, depth = self._value, self._depth
        low, width, scale = self._low, self._width, self._scale
        m = self.map.scale
        num = (value * scale - (low << depth)) * m
        if num < 0:
            return None
        offset = num // (width << depth)
        if offset >= m:
            raise exception.CorruptStream(
                decoded=self.decoded,
                expected=limit if limit is not None else self.decoded,
                position=self.pulled)
        symbol = self.map.locate(offset)
        start, size = self.map.scaled[symbol]
        symbol_top = (low * m + width * (start + size)) << depth
        if (value + 1) * scale * m > symbol_top:
            return None
        self._narrow(symbol)
        self.decoded += 1
        self._renormalize()
        return symbol

    def _renormalize(self):
        low, width, scale = self._low, self._width, self._scale
        value, depth = self._value, self._depth
        while depth:
            if 2 * (low + width) <= scale:
                low <<= 1
            elif 2 * low >= scale:
                low = 2 * low - scale
                value -= 1 << (depth - 1)
            else:
                break
            width <<= 1
            depth -= 1
        self._low, self._width = low, width
        self._value, self._depth = value, depth
        self._cancel(self.decoded)


def encode(amap, symbols, flush=True, precision_ceiling=None):
    encoder = Encoder(amap, precision_ceiling)
    for symbol in symbols:
        encoder.encode_step(symbol)
    if flush:
        encoder.flush()
    return encoder.output


def decode(amap, bits, count, precision_ceiling=None):
    decoder = Decoder(amap, precision_ceiling)
    symbols = decoder.feed(bits, limit=count)
    if len(symbols) < count:
        raise exception.CorruptStream(decoded=len(symbols), expected=count,
                                      position=decoder.pulled)
    return symbols


def delay_profile(amap, sequence, precision_ceiling=None):
    """Per-position decoding delays of one encoded stream.

    Entry i is the number of symbols encoded after x_i before a decoder fed
    the emitted bits (no flush) could output x_i, or None if it never
    could within the stream.
    """
    encoder = Encoder(amap, precision_ceiling)
    decoder = Decoder(amap, precision_ceiling)
    delays = [None] * len(sequence)
    for step, symbol in enumerate(sequence):
        bits = encoder.encode_step(symbol)
        before = decoder.decoded
        decoder.feed(bits, limit=step + 1)
        for i in range(before, decoder.decoded):
            delays[i] = step - i
    return delays


def delay_of_position(amap, sequence, n, horizon, precision_ceiling=None):
    """Delay of the n-th symbol (1-based), or Censored(horizon)."""
    if n < 1 or n + horizon > len(sequence):
        raise exception.InvalidParameter(
            name='position', value=n,
            reason='need 1 <= n and n + horizon <= %d' % len(sequence))
    delay = delay_profile(amap, sequence[:n + horizon],
                          precision_ceiling)[n - 1]
    if delay is None:
        return Censored(horizon)
    return delay


def _strings(size, n):
    return itertools.product(range(size), repeat=n)


def instantaneous_redundancy(measure, prefix, d, p):
    """r_d(x^n) = D(P^d || mu_d(. | x^n)) by enumeration of X^d.

    ``measure`` maps a sequence to its induced measure. The conditional
    measure may sum to less than one; the divergence is taken as is.
    """
    prefix = list(prefix)
    base = measure(prefix)
    total = 0.0
    for tail in _strings(p.size, d):
        prob = math.prod((p.pmf[s] for s in tail), start=Fraction(1))
        if not prob:
            continue
        child = measure(prefix + list(tail))
        if not child:
            return math.inf
        total += float(prob) * numerics.log2(prob * base / child)
    return total


def exact_redundancy(measure, n, p):
    """R_n = (1/n) D(P^n || mu_n) by enumeration of X^n."""
    if n < 1:
        raise exception.InvalidParameter(name='n', value=n,
                                         reason='must be positive')
    total = 0.0
    for sequence in _strings(p.size, n):
        prob = math.prod((p.pmf[s] for s in sequence), start=Fraction(1))
        if not prob:
            continue
        mu = measure(list(sequence))
        if not mu:
            return math.inf
        total += float(prob) * numerics.log2(prob / mu)
    return total / n


def expected_code_length(output, n, p):
    """E|E(X^n)| / n, with ``output`` mapping a sequence to its bits."""
    total = 0.0
    for sequence in _strings(p.size, n):
        prob = math.prod((p.pmf[s] for s in sequence), start=Fraction(1))
        if prob:
            total += float(prob) * len(output(list(sequence)))
    return total / n


def gim_representation(output, prefix, d, size):
    """The intervals B[E(s x^d)] over all x^d, merged.

    ``output`` maps a symbol sequence to the encoder's emitted bits.
    Checks that every codeword extends E(s), that codewords of sibling
    prefixes (s with its last symbol replaced) never nest, and that the
    mbi of the union is B[E(s)]. Any failure means the encoder is not
    d-delay-constrained at ``prefix``.
    """
    prefix = list(prefix)

    def codewords(stem):
        return {output(stem + list(tail)) for tail in _strings(size, d)}

    def fail(reason):
        raise exception.NotDelayConstrained(
            d=d, prefix=''.join(str(s) for s in prefix) or '<empty>',
            reason=reason)

    root = output(prefix)
    words = codewords(prefix)
    for word in words:
        if not word.startswith(root):
            fail('codeword %s does not extend %s' % (word, root))

    if prefix:
        for sibling in range(size):
            if sibling == prefix[-1]:
                continue
            for other in codewords(prefix[:-1] + [sibling]):
                for word in words:
                    if word.startswith(other) or other.startswith(word):
                        fail('codewords %s and %s of sibling prefixes '
                             'overlap' % (word, other))

    intervals = sorted(numerics.binary_interval(w) for w in words)
    merged = []
    for interval in intervals:
        if merged and interval.low <= merged[-1].high:
            last = merged[-1]
            if interval.high > last.high:
                merged[-1] = numerics.UnitInterval.from_bounds(
                    last.low, interval.high)
            continue
        merged.append(interval)
    hull = numerics.UnitInterval.from_bounds(merged[0].low, merged[-1].high)
    if numerics.mbi(hull) != root:
        fail('mbi of the union is %s, not %s' % (numerics.mbi(hull), root))
    return merged
