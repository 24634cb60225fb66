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
"""CSV and table rendering of bounds and estimates.

CSV output is byte-stable: ``\\n`` line ends and ``%.6g`` floats, with the
run's seed recorded on a leading comment line.
"""

import csv
import math

import prettytable

from drsc.analysis import bounds
from drsc import delay_codec
from drsc import exception


TAIL_COLUMNS = ('d', 'samples', 'exceedances', 'p_hat', 'ci_hi', 'bound')
REDUNDANCY_COLUMNS = ('d', 'mismatch_term', 'insertion_rate', 'rate_ci_hi',
                      'combined', 'combined_ci_hi', 'theorem2_bound')
ENSEMBLE_COLUMNS = ('d', 'trials', 'hits', 'rate', 'ci_hi', 'exact',
                    'fixed_order', 'renyi_reference')
BOUND_COLUMNS = ('d', 'delay_tail', 'insertion', 'redundancy')


def format_value(value):
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if math.isnan(value):
        return 'nan'
    if math.isinf(value):
        return 'inf'
    return '%.6g' % value


def _write(handle, comment, columns, rows, notes=()):
    handle.write('# %s\n' % comment)
    for note in notes:
        handle.write('# %s\n' % note)
    writer = csv.writer(handle, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(getattr(row, c)) for c in columns])


def write_tail_csv(handle, estimate):
    _write(handle,
           'delay-tail seed=%d horizon=%d censored=%d'
           % (estimate.seed, estimate.horizon, estimate.censored),
           TAIL_COLUMNS, estimate.rows)


def _unresolved_notes(estimates):
    unresolved = [str(e.d) for e in estimates if not e.resolved]
    if not unresolved:
        return ()
    return ('unresolved d=%s: too few super-steps to check the bounds'
            % ','.join(unresolved),)


def write_redundancy_csv(handle, estimates, samples):
    seed = estimates[0].seed if estimates else 0
    horizon = estimates[0].horizon if estimates else 0
    _write(handle,
           'redundancy seed=%d samples=%d horizon=%d'
           % (seed, samples, horizon),
           REDUNDANCY_COLUMNS, estimates,
           _unresolved_notes(estimates))


def write_ensemble_csv(handle, reports):
    seed = reports[0].seed if reports else 0
    _write(handle, 'ensemble seed=%d' % seed, ENSEMBLE_COLUMNS, reports)


class BoundRow(object):

    def __init__(self, d, delay_tail, insertion, redundancy):
        self.d = d
        self.delay_tail = delay_tail
        self.insertion = insertion
        self.redundancy = redundancy


def bound_rows(p, q, d_values, aggregation_ceiling=None):
    """Delay-tail, insertion and redundancy bounds for every d.

    Bounds that do not exist for a d (budget too small, or c(pmax) not
    below d) are reported as nan.
    """
    rows = []
    for d in d_values:
        try:
            model = delay_codec.build_extended_model(p, d,
                                                     aggregation_ceiling)
            insertion = bounds.insertion_prob_bound(
                model.super_model, model.effective_delay, model.epsilon)
        except exception.DataError:
            insertion = math.nan
        try:
            redundancy = bounds.redundancy_delay_bound(p, d)
        except exception.BoundUndefined:
            redundancy = math.nan
        rows.append(BoundRow(d, bounds.delay_tail_bound(p, q, d),
                             insertion, redundancy))
    return rows


def write_bounds_csv(handle, rows, summary=None):
    """Bounds per d, then the exponent summary as a second block."""
    _write(handle, 'bounds', BOUND_COLUMNS, rows)
    if summary is not None:
        _write(handle, 'exponents', bounds.ExponentSummary._fields,
               [summary])


def table(columns, rows):
    t = prettytable.PrettyTable(list(columns))
    for row in rows:
        t.add_row([format_value(getattr(row, c)) for c in columns])
    return t


def exponent_table(summary):
    t = prettytable.PrettyTable(['Exponent', 'Bits'])
    t.align['Exponent'] = 'l'
    t.add_row(['log2(1/pmax) (lower)', format_value(summary.lower_pmax)])
    t.add_row(['H2(P) (lower)', format_value(summary.lower_renyi)])
    t.add_row(['8 log2(K/pmin) (upper)',
               format_value(summary.upper_general)])
    t.add_row(['8 log2(1/pmin) (upper, interval mapping)',
               format_value(summary.upper_interval_mapping)])
    return t
