"""Exception hierarchy shared by all nistab modules."""

from __future__ import annotations


class NIStabError(Exception):
    """Base class for all nistab errors."""


class DimensionError(NIStabError):
    """Matrix or vector dimensions are inconsistent with the operation."""


class NotHermitianError(NIStabError):
    """Input matrix violates the Hermitian-symmetry precondition."""


class NotPSDError(NIStabError):
    """Matrix has an eigenvalue below the negative tolerance band."""


class NearPoleError(NIStabError):
    """Transfer-function evaluation point is too close to a pole.

    Carries the offending eigenvalue of the state matrix.
    """

    def __init__(self, message: str, eigenvalue: complex):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class SingularAError(NIStabError):
    """State matrix A is numerically singular (pole at the origin)."""


class AsymmetricDError(NIStabError):
    """Feedthrough matrix D is not symmetric within tolerance."""


class NotAPoleError(NIStabError):
    """Requested frequency does not match any eigenvalue of A."""


class NotSimplePoleError(NIStabError):
    """Imaginary-axis eigenvalue has algebraic multiplicity greater than one."""


class DegenerateEigenvectorsError(NIStabError):
    """Left/right eigenvectors are numerically orthogonal; residue undefined."""


class NotCertifiedError(NIStabError):
    """Operation requires a certificate with verdict 'certified'."""


class FeedthroughError(NIStabError):
    """Loop feedthrough product D1 @ D2 is not negligible."""


class NonRealSpectrumError(NIStabError):
    """DC-gain product has significantly complex eigenvalues."""


class GenerationFailedError(NIStabError):
    """Random system generation exhausted its retry budget."""
