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


DEFAULT_PRECISION_CEILING = 16777216
DEFAULT_AGGREGATION_CEILING = 4096
DEFAULT_ENSEMBLE_CEILING = 4096

codec_group = cfg.OptGroup(
    'codec',
    title='Codec Options',
    help="Limits applied by the exact arithmetic encoder and decoder")

codec_opts = [
    cfg.IntOpt(
        'precision_ceiling',
        default=DEFAULT_PRECISION_CEILING,
        min=64,
        help="""
Maximum bit length of the exact frame denominator an encoder or decoder may
reach. Interval coordinates of a non-dyadic model grow with every coded
symbol; once this many bits are needed the run aborts instead of rounding.
The DRSC_PRECISION_CEILING environment variable overrides this value when
drsc-manage starts.
"""),
    cfg.IntOpt(
        'aggregation_ceiling',
        default=DEFAULT_AGGREGATION_CEILING,
        min=2,
        help='Largest super-symbol alphabet |X|^k the delay codec may build '
             'when aggregating source symbols.'),
    cfg.IntOpt(
        'ensemble_ceiling',
        default=DEFAULT_ENSEMBLE_CEILING,
        min=2,
        help='Largest |X|^d the rotated-order ensemble simulation may '
             'enumerate.'),
]


def register_opts(conf):
    conf.register_group(codec_group)
    conf.register_opts(codec_opts, group=codec_group)


def list_opts():
    return {codec_group.name: codec_opts}
