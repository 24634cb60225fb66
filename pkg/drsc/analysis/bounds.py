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
"""Closed-form delay and redundancy bounds.

All evaluators return floats in bits or probabilities. Values above 1 for
a probability bound are returned as they are; such a bound is trivially
true.
"""

import collections
from fractions import Fraction
import math

from drsc import exception
from drsc import numerics
from drsc import source


KAPPA = math.log2(math.sqrt(2) * math.e / math.log2(math.e))

_SIXTEENTH = Fraction(1, 16)

ExponentSummary = collections.namedtuple(
    'ExponentSummary',
    'lower_pmax lower_renyi upper_general upper_interval_mapping '
    'degenerate dyadic')


def delay_tail_bound(p, q, d):
    """Pr(delay > d) bound for coding source P with a map matched to Q.

    2 pmax^d (d log(nu/pmax) + kappa) + 2 qmax^d nu^d, infinite when P is
    not absolutely continuous with respect to Q.
    """
    ratio = source.nu(p, q)
    if ratio == math.inf:
        return math.inf
    pmax, qmax = float(p.pmax), float(q.pmax)
    ratio = float(ratio)
    return (2 * pmax ** d * (d * math.log2(ratio / pmax) + KAPPA)
            + 2 * qmax ** d * ratio ** d)


def matched_delay_tail_bound(p, d):
    """2 pmax^d (d log(1/pmax) + kappa + 1)."""
    pmax = float(p.pmax)
    return 2 * pmax ** d * (d * math.log2(1 / pmax) + KAPPA + 1)


def mismatch_tail_decays(p, q):
    """True when qmax * nu(P, Q) < 1, so the mismatched tail decays."""
    ratio = source.nu(p, q)
    if ratio == math.inf:
        return False
    return q.pmax * ratio < 1


def insertion_prob_bound(p, d_tilde, eps):
    """Bound on the chance of an insertion at a super-step.

    ``p`` is the (super-symbol) source whose pmax enters the bound.
    """
    eps = numerics.as_rational(eps)
    if not 0 < eps < Fraction(1, 2):
        raise exception.InvalidParameter(
            name='epsilon', value=eps, reason='must lie in (0, 1/2)')
    pmax = p.pmax
    scaled = (1 - 2 * eps) * pmax
    return 2 * float(pmax) ** d_tilde * (
        d_tilde * -numerics.log2(scaled) + KAPPA + 1)


def insertion_redundancy_bound(p, d_tilde, eps):
    """log(1/eps) times the insertion bound, plus the mismatch cost."""
    eps = numerics.as_rational(eps)
    return (-numerics.log2(eps) * insertion_prob_bound(p, d_tilde, eps)
            + mismatch_term(eps))


def finite_delay_bound(p, d):
    """insertion_redundancy_bound with eps = pmax^d."""
    return insertion_redundancy_bound(p, d, p.pmax ** d)


def mismatch_term(eps):
    """log2(1 / (1 - 2 eps)): the per-step cost of reserving 2 eps."""
    return -numerics.log2(1 - 2 * numerics.as_rational(eps))


def c_offset(x):
    """0 below 1/16, else 2 floor(1 / log2(2/x)) - 1, as written.

    For every x in [1/16, 1) the floor is 0, so this is -1 there.
    """
    x = numerics.as_rational(x)
    if x < _SIXTEENTH:
        return 0
    return 2 * math.floor(1 / numerics.log2(2 / x)) - 1


def redundancy_delay_bound(p, d):
    """2 pmax^(d-c) ((d-c) log(2/pmax) + 1 + kappa)^2 with c = c(pmax)."""
    c = c_offset(p.pmax)
    if d <= c:
        raise exception.BoundUndefined(
            reason='d=%d at or below c(pmax)=%d' % (d, c))
    exponent = d - c
    pmax = float(p.pmax)
    return 2 * pmax ** exponent * (
        exponent * math.log2(2 / pmax) + 1 + KAPPA) ** 2


def exponent_summary(p):
    """Lower and upper bounds on the redundancy-delay exponent of P."""
    dyadic = p.is_dyadic
    if p.is_degenerate:
        nan = float('nan')
        return ExponentSummary(nan, nan, nan, nan, True, dyadic)
    summary = ExponentSummary(
        lower_pmax=-numerics.log2(p.pmax),
        lower_renyi=source.renyi_entropy(p, 2),
        upper_general=8 * numerics.log2(p.size / p.pmin),
        upper_interval_mapping=8 * numerics.log2(1 / p.pmin),
        degenerate=False,
        dyadic=dyadic)
    slack = 1e-12
    if summary.lower_pmax > summary.lower_renyi + slack:
        raise exception.BoundInconsistency(
            reason='log(1/pmax)=%g above H2=%g'
                   % (summary.lower_pmax, summary.lower_renyi))
    if summary.lower_renyi > summary.upper_interval_mapping + slack:
        raise exception.BoundInconsistency(
            reason='H2=%g above 8 log(1/pmin)=%g'
                   % (summary.lower_renyi, summary.upper_interval_mapping))
    if summary.upper_interval_mapping > summary.upper_general + slack:
        raise exception.BoundInconsistency(
            reason='8 log(1/pmin)=%g above 8 log(K/pmin)=%g'
                   % (summary.upper_interval_mapping, summary.upper_general))
    return summary
