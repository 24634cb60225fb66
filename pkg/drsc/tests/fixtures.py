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
"""Fixtures for drsc tests."""

import logging
import os
import warnings

import fixtures
from oslotest import log


PMFS = {
    'half': 'h 1/2\nt 1/2\n',
    'tern': 'a 1/2\nb 1/4\nc 1/4\n',
    'tern-mismatch': 'a 2/5\nb 3/10\nc 3/10\n',
    'uniform4': 'a 1/4\nb 1/4\nc 1/4\nd 1/4\n',
    'uniform20': ''.join('s%02d 1/20\n' % i for i in range(20)),
    'skewed': 'x 3/5\ny 3/10\nz 1/10\n',
}


class NullHandler(logging.Handler):
    """Formats every record it is handed and drops it.

    Used with Logging below so badly formatted DEBUG messages fail tests
    even when they are not captured.
    """
    def handle(self, record):
        self.format(record)

    def emit(self, record):
        pass

    def createLock(self):
        self.lock = None


class Logging(log.ConfigureLogging):
    """Capture logs at INFO and format everything down to DEBUG."""

    def __init__(self):
        super(Logging, self).__init__()
        if self.level is None:
            self.level = logging.INFO
        self.capture_logs = True

    def setUp(self):
        super(Logging, self).setUp()
        if self.level > logging.DEBUG:
            handler = NullHandler()
            self.useFixture(fixtures.LogHandler(handler, nuke_handlers=False))
            handler.setLevel(logging.DEBUG)


class WarningsFixture(fixtures.Fixture):
    """Escalate numeric warnings into test failures."""

    def setUp(self):
        super(WarningsFixture, self).setUp()
        warnings.filterwarnings('error', category=RuntimeWarning,
                                module='drsc')
        self.addCleanup(warnings.resetwarnings)


class PmfFiles(fixtures.Fixture):
    """Writes the named pmf files into a temporary directory.

    ``path(name)`` gives the file of one of PMFS, or of extra ``pmfs``
    passed in.
    """

    def __init__(self, **pmfs):
        super(PmfFiles, self).__init__()
        self.pmfs = dict(PMFS, **pmfs)

    def setUp(self):
        super(PmfFiles, self).setUp()
        self.directory = self.useFixture(fixtures.TempDir()).path
        for name, text in self.pmfs.items():
            with open(self.path(name), 'w') as handle:
                handle.write(text)

    def path(self, name):
        return os.path.join(self.directory, '%s.pmf' % name)
