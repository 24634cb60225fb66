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

import contextlib
import functools
import os
import sys

from oslo_config import cfg
from oslo_log import log as logging
from oslo_upgradecheck import upgradecheck
from oslo_utils import encodeutils
import pbr.version

from drsc.analysis import bounds
from drsc.analysis import estimate
from drsc.analysis import report
from drsc.cmd import verify
from drsc import conf
from drsc import container
from drsc import delay_codec
from drsc import exception
from drsc import source

version_info = pbr.version.VersionInfo('drsc')
LOG = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA_ERROR = 2
EXIT_PROPERTY_VIOLATION = 3

PRECISION_ENV = 'DRSC_PRECISION_CEILING'


def _read_input(path):
    if path in (None, '-'):
        return sys.stdin.buffer.read()
    with open(path, 'rb') as handle:
        return handle.read()


def _write_output(path, data):
    if path in (None, '-'):
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    with open(path, 'wb') as handle:
        handle.write(data)


@contextlib.contextmanager
def _csv_target(path):
    if path is None:
        yield sys.stdout
        return
    with open(path, 'w', newline='') as handle:
        yield handle


def tokenize(model, text, chars=False):
    """Symbol indices of ``text``: whitespace tokens, or characters."""
    if chars:
        tokens = [c for c in text if c not in '\r\n']
    else:
        tokens = text.split()
    return [model.index(token, position)
            for position, token in enumerate(tokens)]


def render(model, symbols, chars=False):
    if not symbols:
        return ''
    tokens = [model.tokens[s] for s in symbols]
    return ('' if chars else ' ').join(tokens) + '\n'


class CodecCommands(object):
    def __init__(self, config):
        self.config = config

    def encode(self):
        args = self.config.command
        model = source.load_pmf(args.pmf)
        text = encodeutils.safe_decode(_read_input(args.input))
        symbols = tokenize(model, text, args.chars)
        extended = delay_codec.build_extended_model(
            model, args.d, self.config.codec.aggregation_ceiling)
        header, bits, ledger = delay_codec.dc_encode(
            extended, symbols, self.config.codec.precision_ceiling)
        if ledger.max_delay > args.d:
            raise exception.NotDelayConstrained(
                d=args.d, prefix='<input>',
                reason='observed delay %d' % ledger.max_delay)
        _write_output(args.output, container.pack(header, bits))
        LOG.info('Encoded N=%d symbols with %d insertions into %d bits '
                 '(%.4f bits/symbol), max delay %d',
                 ledger.consumed, ledger.insertions, bits.length,
                 bits.length / ledger.consumed if ledger.consumed else 0.0,
                 ledger.max_delay)
        return EXIT_OK

    def decode(self):
        args = self.config.command
        header, bits = container.unpack(_read_input(args.input))
        model = None
        if args.pmf:
            model = source.load_pmf(args.pmf)
            if model.ordered_pmf() != header.pmf:
                raise exception.InvalidContainer(
                    offset=len(container.MAGIC) + 1,
                    reason='pmf does not match %s' % args.pmf)
        symbols = delay_codec.dc_decode(
            header, bits, model, self.config.codec.aggregation_ceiling,
            self.config.codec.precision_ceiling)
        if model is None:
            text = ''.join('%d\n' % s for s in symbols)
        else:
            text = render(model, symbols, args.chars)
        _write_output(args.output, encodeutils.safe_encode(text))
        LOG.info('Decoded N=%d symbols from %d payload bits',
                 header.length, bits.length)
        return EXIT_OK


class AnalysisCommands(object):
    def __init__(self, config):
        self.config = config

    def _models(self):
        args = self.config.command
        p = source.load_pmf(args.pmf)
        q = source.load_pmf(args.q) if args.q else p
        if q.size != p.size:
            raise exception.InvalidSourceModel(
                reason='--q has %d symbols, --pmf has %d' % (q.size, p.size))
        return p, q

    def _d_values(self):
        args = self.config.command
        if args.d is not None:
            return [args.d]
        return list(range(1, args.dmax + 1))

    def bounds(self):
        args = self.config.command
        p, q = self._models()
        rows = report.bound_rows(p, q, self._d_values(),
                                 self.config.codec.aggregation_ceiling)
        summary = bounds.exponent_summary(p)
        if args.csv:
            with _csv_target(args.csv) as handle:
                report.write_bounds_csv(handle, rows, summary)
            return EXIT_OK
        print(report.table(report.BOUND_COLUMNS, rows))
        if summary.degenerate:
            print('Degenerate source: one symbol carries all the mass, '
                  'there is nothing to code.')
        elif summary.dyadic:
            print('Dyadic source: zero redundancy at zero delay is '
                  'achievable, the exponent bounds are not needed.')
        print(report.exponent_table(summary))
        return EXIT_OK

    def simulate_delay_tail(self):
        args = self.config.command
        p, q = self._models()
        if args.q and not bounds.mismatch_tail_decays(p, q):
            LOG.warning('qmax * nu(P, Q) >= 1: the mismatched tail bound '
                        'does not decay in d')
        result = estimate.estimate_delay_tail(
            p, q, args.dmax, args.samples, args.horizon, args.seed,
            positions_per_stream=self.config.analysis.positions_per_stream,
            stride=self.config.analysis.position_stride,
            threads=args.threads,
            confidence=self.config.analysis.confidence,
            precision_ceiling=self.config.codec.precision_ceiling)
        with _csv_target(args.csv) as handle:
            report.write_tail_csv(handle, result)
        estimate.check_tail(result)
        return EXIT_OK

    def simulate_redundancy(self):
        args = self.config.command
        p = source.load_pmf(args.pmf)
        results = []
        for d in self._d_values():
            try:
                results.append(estimate.estimate_redundancy(
                    p, d, args.samples, args.horizon, args.seed,
                    threads=args.threads,
                    confidence=self.config.analysis.confidence,
                    aggregation_ceiling=(
                        self.config.codec.aggregation_ceiling),
                    precision_ceiling=self.config.codec.precision_ceiling))
            except exception.DelayBudgetTooSmall as err:
                LOG.warning('Skipping d=%d: %s', d, err.format_message())
        with _csv_target(args.csv) as handle:
            report.write_redundancy_csv(handle, results, args.samples)
        for result in results:
            estimate.check_redundancy(result)
        return EXIT_OK

    def simulate_ensemble(self):
        args = self.config.command
        p = source.load_pmf(args.pmf)
        point = self.config.analysis.ensemble_point
        results = [estimate.estimate_ensemble(
            p, d, args.samples, args.seed, point,
            self.config.analysis.confidence,
            self.config.codec.ensemble_ceiling) for d in self._d_values()]
        with _csv_target(args.csv) as handle:
            report.write_ensemble_csv(handle, results)
        return EXIT_OK

    def verify(self):
        args = self.config.command
        if args.list:
            for name in verify.Checks.suite_names():
                print(name)
            return EXIT_OK
        checks = verify.Checks(self.config, seed=args.seed,
                               trials=args.samples)
        code = checks.check()
        if code == upgradecheck.Code.FAILURE:
            return EXIT_PROPERTY_VIOLATION
        return EXIT_OK


def _usage(parser):
    parser.print_help()
    return EXIT_USAGE


def _add_pmf(parser, required=True):
    parser.add_argument('--pmf', required=required, metavar='<path>',
                        help='Source pmf file, one "<token> <n>/<m>" '
                             'per line')


def _add_simulation(parser, samples, horizon=None, dmax=6):
    parser.add_argument('--seed', type=int, default=0, metavar='<n>',
                        help='Seed of every random draw of the run')
    parser.add_argument('--samples', type=int, default=samples,
                        metavar='<n>', help='Number of sampled streams, '
                                            'positions or trials')
    if horizon is not None:
        parser.add_argument('--horizon', type=int, default=horizon,
                            metavar='<n>', help='Simulation horizon')
    parser.add_argument('--dmax', type=int, default=dmax, metavar='<n>',
                        help='Sweep d = 1..dmax')
    parser.add_argument('--csv', metavar='<path>',
                        help='Write the CSV here instead of stdout')
    parser.add_argument('--threads', type=int, default=1, metavar='<n>',
                        help='Worker processes for the estimators')


def add_command_parsers(subparsers, config):
    codec_commands = CodecCommands(config)
    analysis_commands = AnalysisCommands(config)

    # If we set False here, we avoid having an exit during the parse
    # args part of CONF processing and we can thus print out meaningful
    # help text.
    subparsers.required = False

    help = 'Encode a symbol stream under a hard delay budget.'
    parser = subparsers.add_parser('encode', help=help, description=help)
    _add_pmf(parser)
    parser.add_argument('--d', type=int, required=True, metavar='<n>',
                        help='Delay budget in source symbols')
    parser.add_argument('--chars', action='store_true',
                        help='Treat every character as a symbol')
    parser.add_argument('input', nargs='?', default='-',
                        help='Input text, "-" for stdin')
    parser.add_argument('--output', '-o', default='-',
                        help='Container file, "-" for stdout')
    parser.set_defaults(func=codec_commands.encode)

    help = 'Decode a DRSC container.'
    parser = subparsers.add_parser('decode', help=help, description=help)
    _add_pmf(parser, required=False)
    parser.add_argument('--chars', action='store_true',
                        help='Write symbols without separators')
    parser.add_argument('input', nargs='?', default='-',
                        help='Container file, "-" for stdin')
    parser.add_argument('--output', '-o', default='-',
                        help='Decoded text, "-" for stdout')
    parser.set_defaults(func=codec_commands.decode)

    help = 'Print delay and redundancy bounds of a source.'
    parser = subparsers.add_parser('bounds', help=help, description=help)
    _add_pmf(parser)
    parser.add_argument('--q', metavar='<path>',
                        help='Pmf the coder is matched to (default: --pmf)')
    parser.add_argument('--d', type=int, metavar='<n>',
                        help='A single delay budget')
    parser.add_argument('--dmax', type=int, default=8, metavar='<n>',
                        help='Tabulate d = 1..dmax')
    parser.add_argument('--csv', metavar='<path>',
                        help='Write a CSV here instead of tables')
    parser.set_defaults(func=analysis_commands.bounds)

    help = 'Monte Carlo checks of the bounds.'
    parser = subparsers.add_parser('simulate', help=help, description=help)
    parser.set_defaults(func=functools.partial(_usage, parser))
    simulate_parsers = parser.add_subparsers(description='simulations')

    help = 'Empirical delay tail of arithmetic coding against its bound.'
    tail_parser = simulate_parsers.add_parser(
        'delay-tail', help=help, description=help)
    _add_pmf(tail_parser)
    tail_parser.add_argument('--q', metavar='<path>',
                             help='Pmf the coder is matched to')
    _add_simulation(tail_parser, samples=10000, horizon=200)
    tail_parser.set_defaults(func=analysis_commands.simulate_delay_tail)

    help = 'Redundancy of the delay codec against its bound.'
    redundancy_parser = simulate_parsers.add_parser(
        'redundancy', help=help, description=help)
    _add_pmf(redundancy_parser)
    redundancy_parser.add_argument('--d', type=int, metavar='<n>',
                                   help='A single delay budget')
    _add_simulation(redundancy_parser, samples=20, horizon=500)
    redundancy_parser.set_defaults(
        func=analysis_commands.simulate_redundancy)

    help = 'Hit rate of the rotated-order ensemble.'
    ensemble_parser = simulate_parsers.add_parser(
        'ensemble', help=help, description=help)
    _add_pmf(ensemble_parser)
    ensemble_parser.add_argument('--d', type=int, metavar='<n>',
                                 help='A single delay budget')
    _add_simulation(ensemble_parser, samples=10000, dmax=3)
    ensemble_parser.set_defaults(func=analysis_commands.simulate_ensemble)

    help = 'Run the randomized property suites.'
    parser = subparsers.add_parser('verify', help=help, description=help)
    parser.add_argument('--list', action='store_true',
                        help='List the suites and exit')
    parser.add_argument('--seed', type=int, default=0, metavar='<n>',
                        help='Seed of the random inputs')
    parser.add_argument('--samples', type=int, default=100, metavar='<n>',
                        help='Random cases per suite')
    parser.set_defaults(func=analysis_commands.verify)


def setup_commands(config):
    # This is a separate method because it facilitates unit testing.
    add_parsers = functools.partial(add_command_parsers, config=config)
    command_opt = cfg.SubCommandOpt(
        'command', dest='command', title='Command',
        help='Available commands', handler=add_parsers)
    return [command_opt]


def _apply_environment(config):
    value = os.environ.get(PRECISION_ENV)
    if value is None:
        return
    try:
        # set_override enforces the option's minimum.
        config.set_override('precision_ceiling', int(value), group='codec')
    except ValueError:
        raise exception.InvalidParameter(
            name=PRECISION_ENV, value=value,
            reason='must be an integer of at least 64')


def main(argv=None):
    config = cfg.ConfigOpts()
    conf.register_opts(config)
    config.set_default('use_stderr', True)
    command_opts = setup_commands(config)
    config.register_cli_opts(command_opts)
    if argv is None:
        argv = sys.argv[1:]
    try:
        config(argv, project='drsc',
               version=version_info.version_string(),
               default_config_files=None)
    except SystemExit as err:
        # argparse exits 0 for --help and --version, 2 on bad usage.
        return EXIT_OK if not err.code else EXIT_USAGE
    logging.setup(config, 'drsc')
    if config.log_options:
        config.log_opt_values(LOG, logging.INFO)

    try:
        _apply_environment(config)
        func = config.command.func
        # If return_code ends up None we assume 0.
        return func() or EXIT_OK
    except cfg.NoSuchOptError:
        config.print_help()
        return EXIT_USAGE
    except exception.PropertyViolation as err:
        LOG.error('%s', err.format_message())
        return EXIT_PROPERTY_VIOLATION
    except exception.DataError as err:
        LOG.error('%s', err.format_message())
        return EXIT_DATA_ERROR
    except (IOError, OSError) as err:
        LOG.error('%s', err)
        return EXIT_DATA_ERROR
