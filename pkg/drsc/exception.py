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
"""Exceptions for use in drsc."""

from oslo_log import log as logging


LOG = logging.getLogger(__name__)


class _BaseException(Exception):
    """Base Exception

    To correctly use this class, inherit from it and define
    a 'msg_fmt' property. That msg_fmt will get printf'd
    with the keyword arguments provided to the constructor.

    """
    msg_fmt = "An unknown exception occurred."

    def __init__(self, message=None, **kwargs):
        self.kwargs = kwargs

        if not message:
            try:
                message = self.msg_fmt % kwargs
            except Exception:
                # NOTE: This is done in a separate method so it can be
                # monkey-patched during testing to make it a hard failure.
                self._log_exception()
                message = self.msg_fmt

        self.message = message
        super(_BaseException, self).__init__(message)

    def _log_exception(self):
        # kwargs doesn't match a variable in the message
        # log the issue and the kwargs
        LOG.exception('Exception in string format operation')
        for name, value in self.kwargs.items():
            LOG.error("%s: %s" % (name, value))  # noqa

    def format_message(self):
        # Use the first argument to the python Exception object which
        # should be our full exception message, (see __init__).
        return self.args[0]


class DataError(_BaseException):
    """Bad input data: a malformed model, stream or argument value."""
    msg_fmt = "Invalid data."


class PropertyViolation(_BaseException):
    """A codec guarantee or an analytic bound failed to hold."""
    msg_fmt = "A property check failed."


class InvalidInterval(DataError):
    msg_fmt = ("Invalid interval [%(low)s, %(low)s + %(width)s): "
               "%(reason)s.")


class InvalidPmf(DataError):
    msg_fmt = "Invalid pmf file %(path)s at line %(line)d: %(reason)s."


class InvalidSourceModel(DataError):
    msg_fmt = "Invalid source model: %(reason)s."


class InvalidParameter(DataError):
    msg_fmt = "Invalid %(name)s %(value)s: %(reason)s."


class UnknownSymbol(DataError):
    msg_fmt = "Unknown symbol %(symbol)r at position %(position)d."


class ZeroProbabilitySymbol(DataError):
    msg_fmt = ("Symbol %(symbol)s has zero coding probability and cannot "
               "be encoded.")


class PrecisionCeilingExceeded(DataError):
    msg_fmt = ("Exact frame precision reached %(bits)d bits after "
               "%(consumed)d symbols, above the ceiling of %(ceiling)d "
               "bits.")


class DelayBudgetTooSmall(DataError):
    msg_fmt = ("A delay budget of %(d)d is too small for aggregation "
               "k=%(k)d; the minimal workable delay is %(minimal)d.")


class AggregationInfeasible(DataError):
    msg_fmt = ("Aggregating k=%(k)d symbols gives %(size)d super-symbols, "
               "above the ceiling of %(ceiling)d.")


class EnsembleInfeasible(DataError):
    msg_fmt = ("The rotated-order ensemble over %(size)d super-symbols is "
               "above the ceiling of %(ceiling)d.")


class InvalidOrder(DataError):
    msg_fmt = "Invalid symbol order: %(reason)s."


class UnboundedForbiddenSet(DataError):
    msg_fmt = ("Query [%(low)s, %(high)s) reaches an accumulation edge of "
               "the forbidden set of its host.")


class CorruptStream(DataError):
    msg_fmt = ("Corrupt stream: decoded %(decoded)d of %(expected)d "
               "symbols before running out at bit %(position)d.")


class InvalidContainer(DataError):
    msg_fmt = "Invalid container at byte offset %(offset)d: %(reason)s."


class BoundUndefined(DataError):
    msg_fmt = "Bound is undefined for %(reason)s."


class CodecInvariantViolated(PropertyViolation):
    msg_fmt = "Codec invariant violated: %(reason)s."


class NotDelayConstrained(PropertyViolation):
    msg_fmt = ("Encoder is not %(d)d-delay-constrained at prefix "
               "%(prefix)s: %(reason)s.")


class BoundInconsistency(PropertyViolation):
    msg_fmt = "Exponent ordering violated: %(reason)s."


class BoundExceeded(PropertyViolation):
    msg_fmt = ("Empirical %(quantity)s %(value)s exceeds its bound "
               "%(bound)s at d=%(d)d.")
