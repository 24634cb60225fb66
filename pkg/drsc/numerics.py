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
"""Exact rational and binary-interval algebra.

Everything here works on :class:`fractions.Fraction` values; nothing is
ever rounded. Intervals are half-open, ``[low, low + width)``.
"""

import collections
from fractions import Fraction
import math

from drsc import exception


HALF = Fraction(1, 2)


def as_rational(value):
    """Coerce ``value`` to a Fraction, refusing binary floats."""
    if isinstance(value, float):
        raise exception.InvalidSourceModel(
            reason='floating point value %r is not an exact rational' % value)
    return Fraction(value)


def log2(value):
    """Base 2 logarithm of a positive rational of any size."""
    value = Fraction(value)
    return math.log2(value.numerator) - math.log2(value.denominator)


def _exponent_fits(num, den, k, strict):
    if strict:
        return (num << k) > den
    return (num << k) >= den


def _smallest_exponent(gap, strict):
    gap = Fraction(gap)
    num, den = gap.numerator, gap.denominator
    k = max(den.bit_length() - num.bit_length(), 1)
    while k > 1 and _exponent_fits(num, den, k - 1, strict):
        k -= 1
    while not _exponent_fits(num, den, k, strict):
        k += 1
    return k


def step_exponent_within(gap):
    """Smallest k >= 1 with 2**-k <= gap, for gap > 0."""
    return _smallest_exponent(gap, strict=False)


def step_exponent_below(gap):
    """Smallest k >= 1 with 2**-k < gap, for gap > 0."""
    return _smallest_exponent(gap, strict=True)


class BitString(object):
    """A finite bit string b_1..b_k held as an integer and a length.

    b_1 is the most significant bit of ``value``.
    """

    __slots__ = ('value', 'length')

    def __init__(self, value=0, length=0):
        if length < 0 or value < 0 or value >> length:
            raise ValueError('value %d does not fit in %d bits'
                             % (value, length))
        self.value = value
        self.length = length

    @classmethod
    def from_str(cls, text):
        text = text.strip()
        if text and set(text) - set('01'):
            raise ValueError('not a bit string: %r' % text)
        return cls(int(text, 2) if text else 0, len(text))

    @classmethod
    def from_bits(cls, bits):
        value = length = 0
        for bit in bits:
            value = (value << 1) | (1 if bit else 0)
            length += 1
        return cls(value, length)

    def __len__(self):
        return self.length

    def __iter__(self):
        for shift in range(self.length - 1, -1, -1):
            yield (self.value >> shift) & 1

    def __getitem__(self, index):
        if isinstance(index, slice):
            return BitString.from_bits(list(self)[index])
        if index < 0:
            index += self.length
        if not 0 <= index < self.length:
            raise IndexError('bit index out of range')
        return (self.value >> (self.length - 1 - index)) & 1

    def __add__(self, other):
        return BitString((self.value << other.length) | other.value,
                         self.length + other.length)

    def __eq__(self, other):
        if not isinstance(other, BitString):
            return NotImplemented
        return self.value == other.value and self.length == other.length

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash((self.value, self.length))

    def __str__(self):
        if not self.length:
            return ''
        return format(self.value, '0%db' % self.length)

    def __repr__(self):
        return 'BitString(%r)' % str(self)

    def startswith(self, prefix):
        if prefix.length > self.length:
            return False
        return self.value >> (self.length - prefix.length) == prefix.value


class UnitInterval(collections.namedtuple('UnitInterval', 'low width')):
    """Half-open interval [low, low + width) inside [0, 1)."""

    __slots__ = ()

    def __new__(cls, low, width):
        low = as_rational(low)
        width = as_rational(width)
        if width <= 0:
            raise exception.InvalidInterval(
                low=low, width=width, reason='width must be positive')
        if low < 0 or low + width > 1:
            raise exception.InvalidInterval(
                low=low, width=width, reason='interval leaves [0, 1)')
        return super(UnitInterval, cls).__new__(cls, low, width)

    @classmethod
    def from_bounds(cls, low, high):
        low = as_rational(low)
        return cls(low, as_rational(high) - low)

    @property
    def high(self):
        return self.low + self.width

    def phi(self, fraction):
        """The point (1 - fraction) * low + fraction * high."""
        return self.low + as_rational(fraction) * self.width

    def contains(self, point):
        return self.low <= point < self.high

    def strictly_contains(self, point):
        return self.low < point < self.high

    def issubset(self, other):
        return other.low <= self.low and self.high <= other.high

    def intersects(self, other):
        return self.low < other.high and other.low < self.high

    def __str__(self):
        return '[%s, %s)' % (self.low, self.high)


UNIT = UnitInterval(0, 1)


def binary_interval(bits):
    """The binary interval B[b] represented by the bit string ``bits``."""
    scale = 1 << bits.length
    return UnitInterval(Fraction(bits.value, scale), Fraction(1, scale))


def mbi(interval):
    """Bits of the minimal binary interval containing ``interval``.

    Descends by exact bisection while one half holds the whole interval.
    """
    low, high = interval.low, interval.high
    value = length = 0
    while True:
        if high <= HALF:
            bit = 0
            low, high = 2 * low, 2 * high
        elif low >= HALF:
            bit = 1
            low, high = 2 * low - 1, 2 * high - 1
        else:
            break
        value = (value << 1) | bit
        length += 1
    return BitString(value, length)


def shortest_dyadic_inside(interval):
    """The shortest b with B[b] inside ``interval``, leftmost on ties."""
    num, den = interval.low.numerator, interval.low.denominator
    high = interval.high
    k = 0
    while True:
        scale = 1 << k
        value = -(-num * scale // den)
        if Fraction(value + 1, scale) <= high:
            return BitString(value, k)
        k += 1


def flush_depth_limit(interval):
    """Upper bound ceil(log2(2 / width)) on the flush codeword length."""
    ratio = Fraction(2) / interval.width
    return max(0, step_exponent_within(1 / ratio) if ratio > 1 else 0)
