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
"""Monte Carlo estimators and exact oracles for the delay and redundancy
bounds.

Every stream draws from its own generator seeded with ``[seed, index]``,
so results do not depend on how streams are spread over workers.
"""

import collections
from concurrent import futures
import itertools
import math

import numpy as np
from oslo_log import log as logging
from oslo_utils import timeutils
from scipy import stats

from drsc.analysis import bounds
from drsc import codec
from drsc import delay_codec
from drsc import exception
from drsc import numerics
from drsc import source


LOG = logging.getLogger(__name__)

TailRow = collections.namedtuple(
    'TailRow', 'd samples exceedances p_hat ci_hi bound')
TailEstimate = collections.namedtuple(
    'TailEstimate', 'rows samples censored seed horizon')
RedundancyEstimate = collections.namedtuple(
    'RedundancyEstimate',
    'd mismatch_term insertion_rate rate_ci_hi combined combined_ci_hi '
    'theorem2_bound insertion_bound direct super_steps insertions seed '
    'horizon resolved')
Decomposition = collections.namedtuple(
    'Decomposition',
    'exact mismatch_term insertion_rate decomposed operational')
EnsembleReport = collections.namedtuple(
    'EnsembleReport',
    'd trials hits rate ci_hi exact fixed_order renyi_reference seed')


def wilson_upper(successes, trials, confidence=0.95):
    """Upper limit of the Wilson score interval for a binomial rate."""
    if trials <= 0:
        return 1.0
    z = float(stats.norm.ppf(1 - (1 - confidence) / 2))
    p_hat = successes / trials
    z2 = z * z
    centre = p_hat + z2 / (2 * trials)
    spread = z * math.sqrt(p_hat * (1 - p_hat) / trials
                           + z2 / (4 * trials * trials))
    return min(1.0, (centre + spread) / (1 + z2 / trials))


def _run(worker, jobs, threads):
    if threads > 1 and len(jobs) > 1:
        with futures.ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(worker, jobs))
    return [worker(job) for job in jobs]


def _tail_stream(job):
    p, q, seed, index, positions, stride, horizon, ceiling = job
    length = (positions - 1) * stride + 1 + horizon
    stream = source.Sampler(p, [seed, index]).draw(length)
    profile = codec.delay_profile(codec.make_arithmetic(q), stream, ceiling)
    observed = []
    for t in range(positions):
        delay = profile[t * stride]
        observed.append(None if delay is None or delay > horizon else delay)
    return observed


def estimate_delay_tail(p, q, d_max, samples, horizon, seed,
                        positions_per_stream=256, stride=4, threads=1,
                        confidence=0.95, precision_ceiling=None):
    """Empirical Pr(delay > d) for d = 1..d_max, coding P with Q's map.

    Censored positions (undecoded within the horizon) count as
    exceedances at every d.
    """
    if horizon <= d_max:
        raise exception.InvalidParameter(
            name='horizon', value=horizon,
            reason='must exceed d_max=%d' % d_max)
    if samples < 1:
        raise exception.InvalidParameter(name='samples', value=samples,
                                         reason='must be positive')
    timer = timeutils.StopWatch()
    timer.start()
    jobs = []
    for index, start in enumerate(range(0, samples, positions_per_stream)):
        positions = min(positions_per_stream, samples - start)
        jobs.append((p, q, seed, index, positions, stride, horizon,
                     precision_ceiling))
    observed = list(itertools.chain.from_iterable(
        _run(_tail_stream, jobs, threads)))

    censored = sum(1 for delay in observed if delay is None)
    rows = []
    for d in range(1, d_max + 1):
        exceed = sum(1 for delay in observed if delay is None or delay > d)
        rows.append(TailRow(
            d=d, samples=samples, exceedances=exceed,
            p_hat=exceed / samples,
            ci_hi=wilson_upper(exceed, samples, confidence),
            bound=bounds.delay_tail_bound(p, q, d)))
    LOG.info('Delay tail over %d positions in %d streams done in %.2fs '
             '(%d censored)', samples, len(jobs), timer.elapsed(), censored)
    return TailEstimate(rows, samples, censored, seed, horizon)


def _redundancy_stream(job):
    p, d, seed, index, horizon, aggregation_ceiling, ceiling = job
    model = delay_codec.build_extended_model(p, d, aggregation_ceiling)
    stream = source.Sampler(p, [seed, index]).draw(horizon * model.k)
    _header, bits, ledger = delay_codec.dc_encode(model, stream, ceiling)
    return ledger.insertions, ledger.super_steps, bits.length, len(stream)


def estimate_redundancy(p, d, samples, horizon, seed, threads=1,
                        confidence=0.95, aggregation_ceiling=None,
                        precision_ceiling=None):
    """Redundancy of the delay codec by exact mismatch cost plus the
    Monte Carlo insertion rate.

    ``samples`` streams of ``horizon`` super-steps each are encoded. The
    mismatch term and the combined redundancy are per source symbol; the
    insertion rate is per super-step, like its bound. ``resolved`` is false
    when the run is too short for a zero-insertion result to fall under
    the bounds.
    """
    if samples < 1 or horizon < 1:
        raise exception.InvalidParameter(
            name='samples/horizon', value=(samples, horizon),
            reason='both must be positive')
    timer = timeutils.StopWatch()
    timer.start()
    model = delay_codec.build_extended_model(p, d, aggregation_ceiling)
    jobs = [(p, d, seed, index, horizon, aggregation_ceiling,
             precision_ceiling) for index in range(samples)]
    results = _run(_redundancy_stream, jobs, threads)
    insertions = sum(r[0] for r in results)
    steps = sum(r[1] for r in results)
    bits = sum(r[2] for r in results)
    symbols = sum(r[3] for r in results)

    mismatch = bounds.mismatch_term(model.epsilon) / model.k
    cost = -numerics.log2(model.epsilon) / model.k
    rate = insertions / steps
    rate_hi = wilson_upper(insertions, steps, confidence)
    try:
        closed_form = bounds.redundancy_delay_bound(p, d)
    except exception.BoundUndefined:
        closed_form = math.nan
    insertion_bound = bounds.insertion_prob_bound(
        model.super_model, model.effective_delay, model.epsilon)
    # A run this short cannot show a rate below the bounds even with no
    # insertions at all.
    zero_hi = wilson_upper(0, steps, confidence)
    resolved = zero_hi <= insertion_bound and (
        math.isnan(closed_form) or mismatch + cost * zero_hi <= closed_form)
    estimate = RedundancyEstimate(
        d=d,
        mismatch_term=mismatch,
        insertion_rate=rate,
        rate_ci_hi=rate_hi,
        combined=mismatch + cost * rate,
        combined_ci_hi=mismatch + cost * rate_hi,
        theorem2_bound=closed_form,
        insertion_bound=insertion_bound,
        direct=bits / symbols - source.entropy(p),
        super_steps=steps,
        insertions=insertions,
        seed=seed,
        horizon=horizon,
        resolved=resolved)
    LOG.info('Redundancy at d=%d: %d insertions in %d super-steps, '
             'done in %.2fs', d, insertions, steps, timer.elapsed())
    return estimate


def exact_decomposition(p, d, n, aggregation_ceiling=None,
                        precision_ceiling=None):
    """Exact R_n of the delay codec against its decomposition.

    Enumerates every x^n (n a multiple of k): R_n from the induced
    measure, the expected insertion rate, the decomposition mismatch +
    log(1/eps) * rate per source symbol, and the operational
    E|E(X^n)|/n - H(P) without flush, which never exceeds R_n.
    """
    model = delay_codec.build_extended_model(p, d, aggregation_ceiling)
    if n < 1 or n % model.k:
        raise exception.InvalidParameter(
            name='n', value=n,
            reason='must be a positive multiple of k=%d' % model.k)

    def measure(sequence):
        return delay_codec.extended_measure(model, sequence,
                                            precision_ceiling)

    def output(sequence):
        return delay_codec.encoder_output(model, sequence, precision_ceiling)

    insertions = 0.0
    for sequence in itertools.product(range(p.size), repeat=n):
        prob = source.sequence_probability(p, sequence)
        if prob:
            insertions += float(prob) * delay_codec.dc_encode(
                model, list(sequence), precision_ceiling)[2].insertions
    steps = n // model.k
    rate = insertions / steps
    mismatch = bounds.mismatch_term(model.epsilon) / model.k
    return Decomposition(
        exact=codec.exact_redundancy(measure, n, p),
        mismatch_term=mismatch,
        insertion_rate=rate,
        decomposed=mismatch - numerics.log2(model.epsilon) * rate / model.k,
        operational=(codec.expected_code_length(output, n, p)
                     - source.entropy(p)))


def ensemble_hit_probability(p, d, point=numerics.HALF,
                             ensemble_ceiling=None):
    """Exact rotated-order and fixed-order hit probabilities of ``point``.

    Enumerates all (pivot, symbol) pairs of X^d.
    """
    ensemble = delay_codec.RotatedEnsemble(p, d, ensemble_ceiling)
    point = numerics.as_rational(point)
    pmf = ensemble.super_model.pmf
    hits = [s for s in range(len(pmf))
            if pmf[s] and ensemble.hit(ensemble.super_model.order[0], s,
                                       point)]
    fixed = sum(pmf[s] for s in hits)
    rotated = 0
    for pivot in range(len(pmf)):
        if not pmf[pivot]:
            continue
        rotated += pmf[pivot] * sum(
            pmf[s] for s in range(len(pmf))
            if pmf[s] and ensemble.hit(pivot, s, point))
    return float(rotated), float(fixed)


def estimate_ensemble(p, d, trials, seed, point=numerics.HALF,
                      confidence=0.95, ensemble_ceiling=None):
    """Simulated hit rate with its Wilson limit and the exact values."""
    result = delay_codec.ensemble_simulate(p, d, trials, seed, point,
                                           ensemble_ceiling)
    exact, fixed = ensemble_hit_probability(p, d, point, ensemble_ceiling)
    return EnsembleReport(
        d=d, trials=trials, hits=result.hits, rate=result.rate,
        ci_hi=wilson_upper(result.hits, trials, confidence),
        exact=exact, fixed_order=fixed,
        renyi_reference=result.renyi_reference, seed=seed)


def decay_slope(ds, values):
    """Least-squares slope of log2(value) against d."""
    logs = np.log2(np.asarray(values, dtype=float))
    return float(np.polyfit(np.asarray(ds, dtype=float), logs, 1)[0])


def check_tail(estimate, slack=0.0):
    """Raise BoundExceeded at the first d whose Wilson limit passes the
    bound."""
    for row in estimate.rows:
        if row.ci_hi > row.bound + slack:
            raise exception.BoundExceeded(
                quantity='delay tail', value='%.6g' % row.ci_hi,
                bound='%.6g' % row.bound, d=row.d)


def check_redundancy(estimate):
    """Raise BoundExceeded on a resolved estimate above either bound."""
    if not estimate.resolved:
        LOG.warning('Redundancy at d=%d is unresolved after %d super-steps; '
                    'bounds not checked', estimate.d, estimate.super_steps)
        return
    if estimate.rate_ci_hi > estimate.insertion_bound:
        raise exception.BoundExceeded(
            quantity='insertion rate', value='%.6g' % estimate.rate_ci_hi,
            bound='%.6g' % estimate.insertion_bound, d=estimate.d)
    if not math.isnan(estimate.theorem2_bound) and (
            estimate.combined_ci_hi > estimate.theorem2_bound):
        raise exception.BoundExceeded(
            quantity='redundancy', value='%.6g' % estimate.combined_ci_hi,
            bound='%.6g' % estimate.theorem2_bound, d=estimate.d)
