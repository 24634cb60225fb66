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

import mock
from oslo_upgradecheck import upgradecheck

from drsc.cmd import verify
from drsc import delay_codec
from drsc.tests.functional import base


class VerifySuitesTestCase(base.TestCase):
    """Tests the property suites of "drsc-manage verify"."""

    def setUp(self):
        super(VerifySuitesTestCase, self).setUp()
        self.checks = verify.Checks(self.conf_fixture.conf, seed=3,
                                    trials=10, length=300)

    def test_every_suite_passes(self):
        for name, func in verify.Checks._upgrade_checks:
            result = func(self.checks)
            self.assertEqual(upgradecheck.Code.SUCCESS, result.code,
                             '%s: %s' % (name, result.details))

    def test_gim_representation_on_many_prefixes(self):
        checks = verify.Checks(self.conf_fixture.conf, seed=8, trials=100)
        result = checks._check_gim_representation()
        self.assertEqual(upgradecheck.Code.SUCCESS, result.code)

    def test_check_reports_the_worst_code(self):
        self.assertEqual(upgradecheck.Code.SUCCESS,
                         verify.Checks(self.conf_fixture.conf, trials=2,
                                       length=60).check())

    def test_roundtrip_failure_is_reported(self):
        with mock.patch.object(delay_codec, 'dc_decode', return_value=[]):
            result = self.checks._check_roundtrip()
        self.assertEqual(upgradecheck.Code.FAILURE, result.code)
        self.assertIn('roundtrip mismatch for trial 0', result.details)

    def test_delay_violation_is_reported(self):
        ledger = delay_codec.DelayLedger()
        ledger.delays = [0] * 1500
        ledger.delays[10] = 99
        with mock.patch.object(delay_codec, 'dc_encode',
                               return_value=(None, None, ledger)):
            result = self.checks._check_hard_delay()
        self.assertEqual(upgradecheck.Code.FAILURE, result.code)
        self.assertIn('observed delay 99', result.details)

    def test_geometry_suites_on_many_intervals(self):
        checks = verify.Checks(self.conf_fixture.conf, seed=2, trials=100)
        for func in (verify.Checks._check_delta_set_size,
                     verify.Checks._check_forbidden_free_side):
            result = func(checks)
            self.assertEqual(upgradecheck.Code.SUCCESS, result.code,
                             result.details)

    def test_check_prints_one_row_per_suite(self):
        verify.Checks(self.conf_fixture.conf, trials=1, length=60).check()
        self.output.stdout.seek(0)
        printed = self.output.stdout.read()
        self.assertTrue(printed.startswith('Property Suite Results\n'))
        self.assertNotIn('Upgrade', printed)
        for name in verify.Checks.suite_names():
            self.assertIn(name, printed)
        self.assertEqual(len(verify.Checks.suite_names()),
                         printed.count('Success'))
