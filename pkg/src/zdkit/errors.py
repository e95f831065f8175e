"""Exception types shared across the toolkit."""


class ZdkitError(Exception):
    """Base class for all toolkit errors."""


class ConfluentParameters(ZdkitError):
    """Satake parameters too close together for the bialternant ratio."""


class SizeLimit(ZdkitError):
    """Combinatorial guard exceeded (tableau enumeration, Gram matrices)."""


class MissingLocalFactor(ZdkitError):
    def __init__(self, p):
        self.p = p
        super().__init__(f"no local factor supplied for prime {p}")


class CutoffMismatch(ZdkitError):
    """Tables with different cutoffs or degrees cannot be convolved."""


class RegionError(ZdkitError):
    """Dirichlet-series evaluation requested outside its validated region."""


class PoleAtOne(ZdkitError):
    """Hurwitz zeta evaluated at its pole s = 1."""


class PrincipalCharacter(ZdkitError):
    """Operation requires a nonprincipal (or primitive) character."""


class QuadratureDivergence(ZdkitError):
    """Contour integrand fails its decay envelope at the truncation height."""


class BoundaryZero(ZdkitError):
    """A zero persists on the counting rectangle boundary after retries."""


class NonZeroInput(ZdkitError):
    """Detector invoked at a point that is not a numerical zero."""


class UnsortedInput(ZdkitError):
    """Zero-ordinate file is not strictly increasing."""


class ParseError(ZdkitError):
    def __init__(self, line_no, text):
        self.line_no = line_no
        super().__init__(f"cannot parse ordinate on line {line_no}: {text!r}")


class RangeError(ZdkitError):
    """Requested height T exceeds the dataset's completeness range."""


class IncompleteDataset(ZdkitError):
    """Dataset not complete to the height required by the statistic."""


class EmptySupport(ZdkitError):
    """Linear form has no support tuples below the cutoff."""


class PositivityViolation(ZdkitError):
    """Constructed test function violates a required positivity property."""
