"""Exception hierarchy shared across the package."""


class K3ClsError(Exception):
    """Base class for all errors raised by k3cls."""


class NotSquareError(K3ClsError, ValueError):
    pass


class SingularMatrixError(K3ClsError, ValueError):
    pass


class DegenerateLatticeError(K3ClsError, ValueError):
    pass


class NotDefiniteError(K3ClsError, ValueError):
    """An operation that needs a definite lattice got an indefinite one."""


class NotEvenError(K3ClsError, ValueError):
    pass


class CapExceededError(K3ClsError, RuntimeError):
    """A brute-force search would exceed its configured enumeration cap."""


class NotContainedError(K3ClsError, ValueError):
    pass


class RankMismatchError(K3ClsError, ValueError):
    pass


class GlueError(K3ClsError, ValueError):
    """A glue map is not an anti-isometry or produces a non-integral lattice."""


class UnsupportedLatticeError(K3ClsError, ValueError):
    pass


class ClassificationError(K3ClsError, RuntimeError):
    """Input violates a structural assumption of the classification driver."""


class SignatureMismatchError(K3ClsError, ValueError):
    """Two definite lattices of opposite sign were compared."""
