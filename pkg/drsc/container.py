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
"""The DRSC stream container.

Layout: ``DRSC``, a version byte, then unsigned LEB128 varints K, K pairs
(numerator, denominator) of the pmf in base order, d and N, then the
payload bits MSB first, zero padded to a whole byte. Everything the codec
derives (aggregation, epsilon, the extended order) is rebuilt from the pmf
and d, so none of it is stored.
"""

import collections
from fractions import Fraction

from drsc import exception
from drsc import numerics


MAGIC = b'DRSC'
VERSION = 1


class StreamHeader(collections.namedtuple('StreamHeader',
                                          'pmf d length')):
    """Everything a decoder needs besides the payload bits."""

    __slots__ = ()

    def __new__(cls, pmf, d, length):
        pmf = tuple(Fraction(p) for p in pmf)
        if len(pmf) < 2 or any(p < 0 for p in pmf) or sum(pmf) != 1:
            raise exception.InvalidSourceModel(
                reason='header pmf must be a distribution over at least '
                       'two symbols')
        if d < 1 or length < 0:
            raise exception.InvalidParameter(
                name='header', value=(d, length),
                reason='need d >= 1 and N >= 0')
        return super(StreamHeader, cls).__new__(cls, pmf, d, length)

    @property
    def size(self):
        return len(self.pmf)


def encode_varint(value):
    if value < 0:
        raise ValueError('varints are unsigned')
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def decode_varint(data, offset):
    """Return (value, next offset)."""
    start = offset
    value = shift = 0
    while True:
        if offset >= len(data):
            raise exception.InvalidContainer(
                offset=start, reason='truncated varint')
        byte = data[offset]
        offset += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, offset
        shift += 7


def pack(header, bits):
    out = bytearray(MAGIC)
    out.append(VERSION)
    out += encode_varint(header.size)
    for p in header.pmf:
        out += encode_varint(p.numerator)
        out += encode_varint(p.denominator)
    out += encode_varint(header.d)
    out += encode_varint(header.length)
    nbytes = (bits.length + 7) // 8
    out += (bits.value << (8 * nbytes - bits.length)).to_bytes(nbytes, 'big')
    return bytes(out)


def unpack(data):
    """Parse a container into (StreamHeader, payload BitString)."""
    if data[:len(MAGIC)] != MAGIC:
        raise exception.InvalidContainer(offset=0, reason='bad magic')
    offset = len(MAGIC)
    if offset >= len(data) or data[offset] != VERSION:
        raise exception.InvalidContainer(
            offset=offset, reason='unsupported format version')
    offset += 1

    size_at = offset
    size, offset = decode_varint(data, offset)
    if size < 2:
        raise exception.InvalidContainer(
            offset=size_at, reason='alphabet size %d below 2' % size)
    pmf_at = offset
    pmf = []
    for _ in range(size):
        num, offset = decode_varint(data, offset)
        den_at = offset
        den, offset = decode_varint(data, offset)
        if not den:
            raise exception.InvalidContainer(
                offset=den_at, reason='zero denominator')
        pmf.append(Fraction(num, den))
    if sum(pmf) != 1:
        raise exception.InvalidContainer(
            offset=pmf_at, reason='pmf sums to %s' % sum(pmf))
    d_at = offset
    d, offset = decode_varint(data, offset)
    if d < 1:
        raise exception.InvalidContainer(
            offset=d_at, reason='delay budget must be positive')
    length, offset = decode_varint(data, offset)

    payload = data[offset:]
    bits = numerics.BitString(int.from_bytes(payload, 'big'),
                              8 * len(payload))
    return StreamHeader(pmf, d, length), bits
