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
"""Memoryless source models and their information measures.

Probabilities are exact rationals. Entropies, divergences and the other
logarithmic quantities are returned as floats; they are reported and
compared but never feed back into a coding decision.
"""

import collections
from fractions import Fraction
import itertools
import math

import numpy as np
from oslo_log import log as logging
from oslo_utils import encodeutils
from scipy import special
from scipy import stats

from drsc import exception
from drsc import numerics


LOG = logging.getLogger(__name__)

_TWO_TO_64 = 1 << 64


class SourceModel(object):
    """A finite alphabet with an exact pmf and a total order.

    Symbols are the indices 0..K-1; ``tokens`` are their display names.
    ``order[r]`` is the symbol of rank r, so the smallest symbol of the
    order is ``order[0]``. Product models also carry ``components``, the
    tuple of base symbols each super-symbol stands for.
    """

    def __init__(self, pmf, tokens=None, order=None, components=None):
        pmf = tuple(numerics.as_rational(p) for p in pmf)
        if len(pmf) < 2:
            raise exception.InvalidSourceModel(
                reason='an alphabet needs at least two symbols')
        if any(p < 0 for p in pmf):
            raise exception.InvalidSourceModel(
                reason='negative probability')
        if sum(pmf) != 1:
            raise exception.InvalidSourceModel(
                reason='probabilities sum to %s, not 1' % sum(pmf))
        if tokens is None:
            tokens = [str(i) for i in range(len(pmf))]
        tokens = tuple(tokens)
        if len(tokens) != len(pmf) or len(set(tokens)) != len(tokens):
            raise exception.InvalidSourceModel(
                reason='tokens must be unique, one per symbol')
        if order is None:
            order = range(len(pmf))
        order = tuple(order)
        if sorted(order) != list(range(len(pmf))):
            raise exception.InvalidOrder(
                reason='%s is not a permutation of the alphabet' % (order,))

        self.pmf = pmf
        self.tokens = tokens
        self.order = order
        rank = [0] * len(order)
        for r, s in enumerate(order):
            rank[s] = r
        self.rank = tuple(rank)
        self.components = components
        self._token_index = {t: i for i, t in enumerate(tokens)}

    @classmethod
    def uniform(cls, size):
        return cls([Fraction(1, size)] * size)

    @property
    def size(self):
        return len(self.pmf)

    @property
    def pmax(self):
        return max(self.pmf)

    @property
    def pmin(self):
        """Smallest positive probability."""
        return min(p for p in self.pmf if p > 0)

    @property
    def is_dyadic(self):
        """Every positive probability is a power of 1/2."""
        return all(p == 0 or (p.numerator == 1 and
                              p.denominator & (p.denominator - 1) == 0)
                   for p in self.pmf)

    @property
    def is_degenerate(self):
        return self.pmax == 1

    def index(self, token, position=0):
        try:
            return self._token_index[token]
        except KeyError:
            raise exception.UnknownSymbol(symbol=token, position=position)

    def with_order(self, order):
        return SourceModel(self.pmf, self.tokens, order, self.components)

    def ordered_pmf(self):
        """The pmf listed by rank."""
        return tuple(self.pmf[s] for s in self.order)

    def product(self, k, ceiling=None):
        """The k-fold product source over super-symbols.

        Super-symbols are numbered in lexicographic order of their base
        ranks, which is also the order of the product model.
        """
        size = self.size ** k
        if ceiling is not None and size > ceiling:
            raise exception.AggregationInfeasible(
                k=k, size=size, ceiling=ceiling)
        components = tuple(itertools.product(self.order, repeat=k))
        pmf = [math.prod((self.pmf[s] for s in c), start=Fraction(1))
               for c in components]
        tokens = ['.'.join(self.tokens[s] for s in c) for c in components]
        LOG.debug('Built %d-fold product source over %d super-symbols',
                  k, size)
        return SourceModel(pmf, tokens, components=components)

    def type_grouped_order(self):
        """An order in which every type class occupies a contiguous run.

        Only meaningful on product models. Classes are sorted by their
        count vectors over the base symbols (most mass on low symbols
        first), lexicographically inside a class.
        """
        if self.components is None:
            raise exception.InvalidOrder(
                reason='type grouping needs a product model')
        width = max(max(c) for c in self.components) + 1

        def key(index):
            counts = np.bincount(self.components[index], minlength=width)
            return (tuple(-counts), index)

        return tuple(sorted(range(self.size), key=key))

    def __eq__(self, other):
        if not isinstance(other, SourceModel):
            return NotImplemented
        return self.pmf == other.pmf and self.order == other.order

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __hash__(self):
        return hash((self.pmf, self.order))

    def __repr__(self):
        return 'SourceModel(%s)' % ', '.join(str(p) for p in self.pmf)


class TypeVector(collections.namedtuple('TypeVector', 'counts n')):
    """Empirical symbol counts of a sequence of length n."""

    __slots__ = ()

    def frequencies(self):
        if not self.n:
            raise exception.InvalidParameter(
                name='type', value=self.counts,
                reason='the empty sequence has no empirical distribution')
        return tuple(Fraction(c, self.n) for c in self.counts)

    def as_model(self):
        return SourceModel(self.frequencies())


def parse_pmf(text, path='<string>'):
    """Read the ``<token> <numerator>/<denominator>`` pmf format."""
    tokens, pmf = [], []
    line_no = 0
    for line_no, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise exception.InvalidPmf(
                path=path, line=line_no,
                reason='expected "<token> <numerator>/<denominator>"')
        token, value = fields
        try:
            prob = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise exception.InvalidPmf(
                path=path, line=line_no,
                reason='%r is not an exact fraction' % value)
        if prob < 0:
            raise exception.InvalidPmf(
                path=path, line=line_no, reason='negative probability')
        if token in tokens:
            raise exception.InvalidPmf(
                path=path, line=line_no,
                reason='duplicate token %r' % token)
        tokens.append(token)
        pmf.append(prob)
    if len(pmf) < 2:
        raise exception.InvalidPmf(
            path=path, line=line_no,
            reason='an alphabet needs at least two symbols')
    if sum(pmf) != 1:
        raise exception.InvalidPmf(
            path=path, line=line_no,
            reason='probabilities sum to %s, not 1' % sum(pmf))
    return SourceModel(pmf, tokens)


def load_pmf(path):
    with open(path, 'rb') as handle:
        text = encodeutils.safe_decode(handle.read())
    model = parse_pmf(text, path)
    LOG.debug('Loaded %d-symbol source from %s', model.size, path)
    return model


def format_pmf(model):
    return ''.join('%s %d/%d\n' % (t, p.numerator, p.denominator)
                   for t, p in zip(model.tokens, model.pmf))


def _as_array(model):
    return np.array([float(p) for p in model.pmf])


def _check_alphabets(p, q):
    if p.size != q.size:
        raise exception.InvalidSourceModel(
            reason='alphabet sizes %d and %d differ' % (p.size, q.size))


def entropy(p):
    return float(stats.entropy(_as_array(p), base=2))


def renyi_entropy(p, alpha):
    """H_alpha(P) in bits; the collision entropy is computed exactly."""
    if alpha <= 0 or alpha == 1:
        raise exception.InvalidParameter(
            name='alpha', value=alpha,
            reason='Renyi order must be positive and not 1; '
                   'use entropy() for order 1')
    if alpha == 2:
        return -numerics.log2(sum(x * x for x in p.pmf))
    support = _as_array(p)
    support = support[support > 0]
    return float(np.log2(np.sum(support ** alpha)) / (1 - alpha))


def _simplex_grid(parts, total):
    if parts == 1:
        return np.array([[total]])
    blocks = []
    for first in range(total + 1):
        rest = _simplex_grid(parts - 1, total - first)
        blocks.append(np.column_stack(
            [np.full(len(rest), first), rest]))
    return np.vstack(blocks)


def renyi_variational(p, alpha, grid_step):
    """min over a simplex grid of alpha/(alpha-1) D(Q||P) + H(Q).

    Equals H_alpha(P) up to the grid resolution for alpha > 1.
    """
    if alpha <= 1:
        raise exception.InvalidParameter(
            name='alpha', value=alpha,
            reason='the minimum form holds only for orders above 1')
    if p.size > 4:
        raise exception.InvalidParameter(
            name='alphabet size', value=p.size,
            reason='grid search is limited to four symbols')
    steps = int(round(1 / grid_step))
    if steps < 1:
        raise exception.InvalidParameter(
            name='grid_step', value=grid_step, reason='must be at most 1')
    grid = _simplex_grid(p.size, steps) / steps
    target = _as_array(p)
    with np.errstate(divide='ignore'):
        divergence_bits = special.rel_entr(grid, target).sum(axis=1)
        entropy_bits = special.entr(grid).sum(axis=1)
    value = (alpha / (alpha - 1)) * divergence_bits + entropy_bits
    return float(np.min(value) / np.log(2))


def divergence(p, q):
    """D(P||Q) in bits; infinite when P is not absolutely continuous."""
    _check_alphabets(p, q)
    if any(a > 0 and b == 0 for a, b in zip(p.pmf, q.pmf)):
        return math.inf
    return float(stats.entropy(_as_array(p), _as_array(q), base=2))


def nu(p, q):
    """The largest likelihood ratio P(x)/Q(x) over the support of P."""
    _check_alphabets(p, q)
    ratios = []
    for a, b in zip(p.pmf, q.pmf):
        if a == 0:
            continue
        if b == 0:
            return math.inf
        ratios.append(a / b)
    return max(ratios)


class Sampler(object):
    """Seeded i.i.d. draws from a model.

    Each draw inverts the cumulative distribution, taken in symbol index
    order, against a uniform 64-bit integer. The thresholds are exact
    ceilings of cumulative probability times 2**64, so a symbol's chance is
    off from its pmf by less than 2**-64.
    """

    def __init__(self, model, seed):
        self.model = model
        if isinstance(seed, np.random.Generator):
            self.rng = seed
        else:
            self.rng = np.random.default_rng(seed)
        cumulative = itertools.accumulate(model.pmf[:-1])
        self.thresholds = np.array(
            [min(-(-c.numerator * _TWO_TO_64 // c.denominator),
                 _TWO_TO_64 - 1) for c in cumulative],
            dtype=np.uint64)

    def draw(self, n):
        if n < 0:
            raise exception.InvalidParameter(
                name='sample count', value=n, reason='must not be negative')
        uniforms = self.rng.integers(0, _TWO_TO_64 - 1, size=n,
                                     dtype=np.uint64, endpoint=True)
        return np.searchsorted(self.thresholds, uniforms,
                               side='right').tolist()


def sample(p, n, seed):
    return Sampler(p, seed).draw(n)


def type_of(x, size):
    """Occurrence counts of every symbol of a K-ary sequence."""
    for position, symbol in enumerate(x):
        if not 0 <= symbol < size:
            raise exception.UnknownSymbol(symbol=symbol, position=position)
    counts = np.bincount(np.asarray(x, dtype=np.int64), minlength=size)
    return TypeVector(tuple(int(c) for c in counts), len(x))


def enumerate_types(n, size):
    """Every type of length-n sequences over a K-ary alphabet."""
    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    for counts in compositions(n, size):
        yield TypeVector(counts, n)


def type_class_size(counts):
    """|T_Q|: the number of sequences sharing the count vector."""
    size = math.factorial(sum(counts))
    for c in counts:
        size //= math.factorial(c)
    return size


def sequence_probability(p, x):
    """P(x^n) as an exact rational."""
    return math.prod((p.pmf[s] for s in x), start=Fraction(1))
