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

"""
Entry point for oslo-config-generator.

Every option module of drsc.conf exposes ``list_opts`` returning a dict of
group name to option list; this merges them into the list of 2-tuples the
generator expects.
"""

import collections

from drsc.conf import analysis
from drsc.conf import base
from drsc.conf import codec


_OPT_MODULES = (analysis, base, codec)


def list_opts():
    opts = collections.defaultdict(list)
    for module in _OPT_MODULES:
        for group, group_opts in module.list_opts().items():
            opts[group].extend(group_opts)
    return sorted(opts.items())
