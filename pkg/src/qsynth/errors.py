"""Exception types shared across the toolkit.

Every error raised on a user-facing path derives from QsynthError so the
command line layer can map failures to stable exit codes.
"""


class QsynthError(Exception):
    """Base class for all toolkit errors."""


# ---------------------------------------------------------------- table I/O

class PlaError(QsynthError):
    """Base class for table parsing/writing problems."""


class MalformedDirective(PlaError):
    """A dot-directive is missing, malformed, or out of order."""


class BadCube(PlaError):
    """A cube row has the wrong width or an illegal symbol."""


class ConflictingRows(PlaError):
    """Two fully specified rows assign different values to one output."""


# ------------------------------------------------------------ preprocessing

class FuncPrepError(QsynthError):
    """Base class for function preparation failures."""


class SizeLimitExceeded(FuncPrepError):
    """A table or circuit grew past a configured hard cap."""


class NotInjective(FuncPrepError):
    """An operation required a one-to-one table and did not get one."""


class WidthMismatch(FuncPrepError):
    """Input and output widths disagree with what the operation needs."""


class EmptyInput(FuncPrepError):
    """No rows / no words / no bins were supplied."""


class AllZero(FuncPrepError):
    """Every bin of a would-be distribution is zero."""


class AllZeroWithFactor(FuncPrepError):
    """Factor normalization is undefined when the maximum word is zero."""


class NotPowerOfTwo(FuncPrepError):
    """A bin count must be a power of two and is not."""


# ---------------------------------------------------------------- synthesis

class SynthError(QsynthError):
    """Base class for synthesis failures."""


class NotComplete(SynthError):
    """The truth table does not define every input pattern."""


class NotSquare(SynthError):
    """The truth table is not square (input width != output width)."""


class NotBijective(SynthError):
    """The truth table is not a permutation of its domain."""


class NoPivot(SynthError):
    """No admissible pivot column exists for a spectral synthesis step."""


class DuplicateAddress(SynthError):
    """Two memory rows share an address but store different words."""


class ValueOutOfRange(SynthError):
    """A stored angle fell outside [0, 2*pi)."""


class NotNormalized(SynthError):
    """A distribution does not sum to one within tolerance."""


class NoSymmetry(SynthError):
    """The requested symmetry is absent from the value tree."""


# --------------------------------------------------------------- simulation

class SimulationError(QsynthError):
    """Base class for simulation failures."""


class NonClassicalGate(SimulationError):
    """Reversible simulation met a gate outside the X family."""


class TooManyQubits(SimulationError):
    """Dense statevector simulation refuses circuits this wide."""


class NonConvergent(SimulationError):
    """Shot calibration hit its cap without meeting the threshold."""


# ------------------------------------------------------------------ emission

class QasmError(QsynthError):
    """Base class for OpenQASM emission/parsing problems."""


class UnsupportedGateForGateset(QasmError):
    """A gate cannot be expressed in the requested output gate set."""


class UnsupportedStatement(QasmError):
    """The parser met a statement outside the supported subset."""


# -------------------------------------------------------------- applications

class GroverError(QsynthError):
    """Base class for search application failures."""


class NoSolutions(GroverError):
    """The search predicate marks no basis state."""


class AllSolutions(GroverError):
    """The search predicate marks every basis state."""


class VerificationFailed(QsynthError):
    """A circuit did not reproduce its source function."""


class PatternIncomplete(QsynthError):
    """A rotation run does not cover every control assignment (strict mode)."""
