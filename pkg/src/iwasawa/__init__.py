"""Finite-precision arithmetic in the Iwasawa algebra Z_p[[X]]."""

from .errors import (ContextMismatch, DivisionByZero, HypothesisViolated, InvalidGenerator,
                     IwasawaError, NotTorsion, OutOfDisk, PreconditionError, PrecisionExhausted,
                     SchemaError)
from .padic import PadicContext, PadicNumber, arith, cyclotomic_u, valuation
from .series import (DistinguishedPoly, IwasawaSeries, WeierstrassData, associates, divides,
                     eval_at, from_linear_factors, gcd, iota, mu_lambda, normal_form, ring, twist,
                     weierstrass_prep)

__version__ = "0.1.0"
