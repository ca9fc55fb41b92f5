"""projconf: exact verification of conformal structures induced by
projective structures on cotangent-type correspondence spaces.

Layers, bottom up:

* symfield  -- exact rational-function scalars and the expression grammar
* linalg    -- exact linear algebra over Q and over function fields
* liealg    -- matrix models of sl(n+1) inside so(n+1,n+1), graded bases
* spin      -- the real 2^(n+1)-dimensional spin representation
* kostant   -- codifferential, differential, Laplacian, component splits
* projective-- projective structures on a chart, BGG calculus, Cartan gauge
* conformal -- split-signature metrics, tractor and twistor calculus
* construction -- the correspondence space, extension, normalisation and
                  the verification suites
* cli       -- batch front end emitting machine-readable reports
"""

from .symfield import (DegreeCapExceeded, ExprError, Rational, RatFunc,
                       Scalars, differentiate, is_zero, parse_expr)

__version__ = "0.1.0"

__all__ = [
    "Rational", "RatFunc", "Scalars", "parse_expr", "differentiate",
    "is_zero", "ExprError", "DegreeCapExceeded", "__version__",
]
