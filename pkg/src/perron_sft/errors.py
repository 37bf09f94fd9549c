"""Exception hierarchy.

Every error carries a stable ``code`` string and the CLI exit status it maps to:
2 invalid input, 3 violated assumption, 4 numeric failure.
"""


class SFTError(Exception):
    code = "Error"
    exit_code = 1

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details

    def to_dict(self):
        out = {"code": self.code, "message": str(self)}
        if self.details:
            out["details"] = self.details
        return out


class InvalidInput(SFTError):
    code = "InvalidInput"
    exit_code = 2


class AssumptionViolated(SFTError):
    code = "AssumptionViolated"
    exit_code = 3


class NumericFailure(SFTError):
    code = "NumericFailure"
    exit_code = 4


def _make(name, base):
    return type(name, (base,), {"code": name})


SymbolOutOfRange = _make("SymbolOutOfRange", InvalidInput)
LengthOneForbiddenWord = _make("LengthOneForbiddenWord", InvalidInput)
NotReduced = _make("NotReduced", InvalidInput)
EmptyAlphabet = _make("EmptyAlphabet", InvalidInput)
EmptyWord = _make("EmptyWord", InvalidInput)
ParseError = _make("ParseError", InvalidInput)
ZeroDenominator = _make("ZeroDenominator", InvalidInput)
HoleWordForbidden = _make("HoleWordForbidden", InvalidInput)
EmptyHole = _make("EmptyHole", InvalidInput)
WordForbidden = _make("WordForbidden", InvalidInput)
PointNotInShift = _make("PointNotInShift", InvalidInput)

EmptyShift = _make("EmptyShift", AssumptionViolated)
FullShift = _make("FullShift", AssumptionViolated)
NotIrreducible = _make("NotIrreducible", AssumptionViolated)
NotPrimitive = _make("NotPrimitive", AssumptionViolated)
EntropyNotPositive = _make("EntropyNotPositive", AssumptionViolated)
HoleEmptiesShift = _make("HoleEmptiesShift", AssumptionViolated)
BudgetExceeded = _make("BudgetExceeded", AssumptionViolated)

NoRealDominantRoot = _make("NoRealDominantRoot", NumericFailure)
NoConvergence = _make("NoConvergence", NumericFailure)
LimitUndefined = _make("LimitUndefined", NumericFailure)
NotARoot = _make("NotARoot", NumericFailure)
