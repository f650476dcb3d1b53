"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI prints as
``ERR <code>: <detail>``.
"""


class PisotileError(Exception):
    code = "Error"


class NotPisot(PisotileError):
    code = "NotPisot"


class Reducible(PisotileError):
    code = "Reducible"


class DegreeOne(PisotileError):
    code = "DegreeOne"


class ContextMismatch(PisotileError):
    code = "ContextMismatch"


class OutOfRange(PisotileError):
    code = "OutOfRange"


class NegativeInput(PisotileError):
    code = "NegativeInput"


class DigitOutOfRange(PisotileError):
    code = "DigitOutOfRange"


class HypothesesFail(PisotileError):
    code = "HypothesesFail"


class DeadEndNode(PisotileError):
    code = "DeadEndNode"


class BadInterval(PisotileError):
    code = "BadInterval"


class NonSplitPrime(PisotileError):
    code = "NonSplitPrime"


class NotDividingNorm(PisotileError):
    code = "NotDividingNorm"


class DenominatorNotInvertible(PisotileError):
    code = "DenominatorNotInvertible"


class IterationCapExceeded(PisotileError):
    code = "IterationCap"
