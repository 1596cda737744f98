"""Exception hierarchy shared across the package.

Everything raised on bad user input derives from VtCodecError so the CLI
can map it to exit code 2 uniformly.
"""


class VtCodecError(Exception):
    """Base class for all validation and decoding errors in vtcodec."""


class BitValueError(VtCodecError):
    """A sequence contained something other than 0/1."""


class MessageLengthError(VtCodecError):
    """Message length does not match the code's message length y."""


class LengthError(VtCodecError):
    """Word length does not match the expected codeword length n."""


class UnrepresentableDeficit(VtCodecError):
    """Residual parity deficit exceeds the power-of-two parity span.

    Cannot occur for any valid VtParams (the residual is always <= n and
    n fits under the parity span when n is not a power of two); guarded
    anyway so a logic regression fails loudly instead of emitting a
    non-codeword.
    """


class SizeLimit(VtCodecError):
    """Exhaustive enumeration requested for a code too large to enumerate."""


class NoValidPath(VtCodecError):
    """The trellis assigns zero probability to every decoding hypothesis."""


class LengthOverflow(VtCodecError):
    """Word longer than the embedding position table."""


class KeyOverflow(VtCodecError):
    """Statistic key outside the lookup table range."""


class CheckpointError(VtCodecError):
    """Checkpoint blob is corrupt, has a wrong version, or mismatched code."""


class TrainingDiverged(VtCodecError):
    """Training loss became non-finite."""
