"""Exception hierarchy shared by all gkzlog modules."""


class GKZError(Exception):
    """Base class for errors raised by gkzlog.

    ``precondition`` names the mathematical condition that failed, so the
    CLI can report it in its structured error object.
    """

    precondition = "unspecified"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details

    def to_dict(self):
        return {
            "error": type(self).__name__,
            "message": str(self),
            "precondition": self.precondition,
            "details": {k: _jsonable(v) for k, v in self.details.items()},
        }


def _jsonable(value):
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    return str(value)


class MathematicalPreconditionError(GKZError):
    """A precondition of the construction does not hold (CLI exit code 2)."""


class RankDeficient(MathematicalPreconditionError):
    precondition = "rank(A) = d"


class NotHomogeneous(MathematicalPreconditionError):
    precondition = "all columns of A lie on one affine hyperplane off the origin"


class NonPositiveWeight(MathematicalPreconditionError):
    precondition = "g.w > 0 for every monoid generator g"


class NonGenericWeight(MathematicalPreconditionError):
    precondition = "w is generic: every Groebner basis binomial has a strictly heavier term"


class NotInKernel(MathematicalPreconditionError):
    precondition = "every perturbation vector b satisfies A.b = 0"


class ZeroDenominator(MathematicalPreconditionError):
    precondition = "nsupp(v) is contained in supp(B) union nsupp(v+u)"


class AssumptionViolated(MathematicalPreconditionError):
    precondition = "B linearly independent and nsupp(v) within supp(B) union nsupp(v+u) for all u in L"


class QNotInPerp(MathematicalPreconditionError):
    precondition = "q lies in the orthogonal complement of P_N"


class NotABasis(MathematicalPreconditionError):
    precondition = "B is a Z-basis of L = ker_Z(A)"


class NotArtinian(MathematicalPreconditionError):
    precondition = "C[s]/P is finite dimensional"


class NotAUnit(GKZError):
    precondition = "truncated series has a nonzero constant term"


class VariableMismatch(GKZError):
    precondition = "operands live in the same polynomial ring"


class UnknownFixture(GKZError):
    precondition = "fixture name is one of the bundled fixtures"
