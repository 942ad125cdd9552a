"""U-cross Gram matrices, dual frames and their certificates.

Frames are passed as synthesis matrices: a (dim, count) complex array whose
columns are the frame elements.
"""

from ._gramkit import *  # noqa: F401,F403
from ._gramkit import InvalidInput, PreconditionFailed, TheoremViolation, TolerancePolicy

__all__ = [name for name in dir() if not name.startswith("_")]
