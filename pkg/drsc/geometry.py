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
"""Forbidden points of an interval and the fictitious-symbol regions.

The forbidden set of a host interval I is its centre m(I), the midpoint of
the minimal binary interval holding I, together with the chains of
iterated dyadic left and right adjacents of that centre. A next interval
whose interior avoids every forbidden point can be decoded completely from
bits inside I. The set is infinite (it accumulates at the right edge of I
and, unless the left gap is dyadic, at the left edge) so it is only ever
queried over ranges.
"""

import collections
from fractions import Fraction
import math

from oslo_log import log as logging

from drsc import exception
from drsc import numerics


LOG = logging.getLogger(__name__)

LEFT = 'L'
RIGHT = 'R'

_THREE_EIGHTHS = Fraction(3, 8)
_FIVE_EIGHTHS = Fraction(5, 8)

FictitiousRegions = collections.namedtuple('FictitiousRegions', 'left right')


def _is_dyadic(value):
    den = Fraction(value).denominator
    return den & (den - 1) == 0


def midpoint_of_mbi(interval):
    """m(I): the midpoint of B[mbi(I)]. Always a point of ``interval``."""
    dyadic = numerics.binary_interval(numerics.mbi(interval))
    return dyadic.low + dyadic.width / 2


def left_adjacent(interval, point):
    """Smallest p - 2**-k lying in [interval.low, point), or None."""
    gap = point - interval.low
    if gap <= 0:
        return None
    return point - Fraction(1, 1 << numerics.step_exponent_within(gap))


def right_adjacent(interval, point):
    """Largest p + 2**-k lying in (point, interval.high), or None."""
    gap = interval.high - point
    if gap <= 0:
        return None
    return point + Fraction(1, 1 << numerics.step_exponent_below(gap))


class AdjacentChain(object):
    """The iterated adjacents of ``anchor`` inside ``host``.

    Iterating yields l(p), l(l(p)), ... (or the right-hand mirror), each a
    negative power of two away from its predecessor. A left chain ends
    when it lands on host.low; a right chain never ends.
    """

    def __init__(self, host, anchor, direction):
        if direction not in (LEFT, RIGHT):
            raise ValueError('direction must be %s or %s' % (LEFT, RIGHT))
        self.host = host
        self.anchor = anchor
        self.direction = direction

    @property
    def finite(self):
        return self.direction == LEFT and _is_dyadic(
            self.anchor - self.host.low)

    def __iter__(self):
        step = left_adjacent if self.direction == LEFT else right_adjacent
        point = step(self.host, self.anchor)
        while point is not None:
            yield point
            point = step(self.host, point)


class ForbiddenSet(object):
    """S0(host) as a range-queryable object."""

    def __init__(self, host):
        self.host = host
        self.center = midpoint_of_mbi(host)

    def left_chain(self):
        return AdjacentChain(self.host, self.center, LEFT)

    def right_chain(self):
        return AdjacentChain(self.host, self.center, RIGHT)

    def points_in(self, query):
        """Forbidden points strictly inside ``query``.

        A forbidden point on query.low is allowed, since an interval may
        start on one. Raises UnboundedForbiddenSet when the query reaches
        an edge at which the set accumulates.
        """
        if not query.issubset(self.host):
            raise exception.InvalidInterval(
                low=query.low, width=query.width,
                reason='query is not inside host %s' % (self.host,))
        left, right = self.left_chain(), self.right_chain()
        if query.high == self.host.high or (
                query.low == self.host.low and not left.finite):
            raise exception.UnboundedForbiddenSet(
                low=query.low, high=query.high)

        found = []
        if query.strictly_contains(self.center):
            found.append(self.center)
        for point in left:
            if point <= query.low:
                break
            if point < query.high:
                found.append(point)
        for point in right:
            if point >= query.high:
                break
            if point > query.low:
                found.append(point)
        return sorted(found)

    def delta_set(self, delta):
        """Chain points and the centre in [low + delta, high - delta)."""
        delta = numerics.as_rational(delta)
        if not 0 < delta < self.host.width:
            raise exception.InvalidInterval(
                low=self.host.low, width=self.host.width,
                reason='delta %s is outside (0, width)' % delta)
        floor, ceiling = self.host.low + delta, self.host.high - delta
        if floor >= ceiling:
            return []
        found = []
        if floor <= self.center < ceiling:
            found.append(self.center)
        for point in self.left_chain():
            if point < floor:
                break
            if point < ceiling:
                found.append(point)
        for point in self.right_chain():
            if point >= ceiling:
                break
            if point >= floor:
                found.append(point)
        return sorted(found)


def forbidden_points_in(host, query):
    return ForbiddenSet(host).points_in(query)


def adjacent_delta_set(host, delta):
    return ForbiddenSet(host).delta_set(delta)


def delta_set_size_bound(host, delta):
    """1 + 2 log2(width / delta), the ceiling on |S_delta|."""
    return 1 + 2 * math.log2(host.width / numerics.as_rational(delta))


def lr_subintervals(interval):
    """The (3/8, 1/2) and (1/2, 5/8) relative regions of ``interval``."""
    middle = interval.phi(numerics.HALF)
    return FictitiousRegions(
        numerics.UnitInterval.from_bounds(
            interval.phi(_THREE_EIGHTHS), middle),
        numerics.UnitInterval.from_bounds(
            middle, interval.phi(_FIVE_EIGHTHS)))


def forbidden_free_side(interval):
    """LEFT or RIGHT, whichever region holds no forbidden point of I.

    LEFT wins when both are free.
    """
    forbidden = ForbiddenSet(interval)
    regions = lr_subintervals(interval)
    if not forbidden.points_in(regions.left):
        return LEFT
    if not forbidden.points_in(regions.right):
        return RIGHT
    LOG.error('Both fictitious regions of %s hold forbidden points', interval)
    raise exception.CodecInvariantViolated(
        reason='no forbidden-free fictitious region in %s' % (interval,))
