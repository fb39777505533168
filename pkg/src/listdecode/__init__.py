"""List decoding of subfield-evaluation Reed-Solomon and folded Hermitian-tower codes.

The decoders interpolate a linear polynomial, solve the resulting functional
equation down to a periodic affine subspace, and prune that subspace with a
subspace design or a hierarchically subspace-evasive set.  Every stage has a
brute-force reference in :mod:`listdecode.oracle`.
"""

from __future__ import annotations

from .errors import ListDecodeError

__version__ = "0.1.0"

__all__ = ["ListDecodeError", "__version__"]
