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
from oslo_config import cfg


analysis_group = cfg.OptGroup(
    'analysis',
    title='Analysis Options',
    help="Tunables of the Monte Carlo bound estimators")

analysis_opts = [
    cfg.IntOpt(
        'positions_per_stream',
        default=256,
        min=1,
        help="""
Number of delay positions sampled from each simulated stream by the
delay-tail estimator. Each stream is long enough to observe every sampled
position for the full horizon.
"""),
    cfg.IntOpt(
        'position_stride',
        default=4,
        min=1,
        help='Spacing, in source symbols, between sampled delay positions.'),
    cfg.FloatOpt(
        'confidence',
        default=0.95,
        min=0.5,
        max=0.999999,
        help='Confidence level of the Wilson score upper limits reported '
             'next to every empirical probability.'),
    cfg.StrOpt(
        'ensemble_point',
        default='1/2',
        help='Point of [0, 1), written as an exact fraction, sampled by the '
             'rotated-order ensemble hit-rate simulation.'),
]


def register_opts(conf):
    conf.register_group(analysis_group)
    conf.register_opts(analysis_opts, group=analysis_group)


def list_opts():
    return {analysis_group.name: analysis_opts}
