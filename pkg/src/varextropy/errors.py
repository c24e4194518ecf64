"""Exception hierarchy.

Every error carries a short ``category`` string so the command-line front end
can report a machine-readable failure reason.
"""


class VarJError(ValueError):
    category = "error"


class InvalidParameters(VarJError):
    category = "invalid-parameters"


class DomainError(VarJError):
    category = "domain-error"


class SupportMismatch(VarJError):
    category = "support-mismatch"


class SupportViolation(VarJError):
    category = "support-violation"


class NonFiniteIntegrand(VarJError, ArithmeticError):
    category = "non-finite-integrand"


class NoConvergence(VarJError, ArithmeticError):
    category = "no-convergence"


class DegenerateSample(VarJError):
    category = "degenerate-sample"


class EmptyDataset(VarJError):
    category = "empty-dataset"


class ParseError(VarJError):
    category = "parse-error"


class DeltaExcluded(DomainError):
    category = "delta-excluded"


class DerivativeInstability(VarJError, ArithmeticError):
    category = "derivative-instability"


class StepDegeneracy(VarJError, ArithmeticError):
    category = "step-degeneracy"


class AllMassExcluded(VarJError):
    category = "all-mass-excluded"


class BoundaryProbability(VarJError):
    category = "boundary-probability"
