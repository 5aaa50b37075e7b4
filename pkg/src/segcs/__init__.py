"""Segmented compressive sampling.

Permuted-segment constructions for sampling matrices whose extra rows
reuse the analog products already computed by the original branches,
closed forms for the resulting sample covariance, capacity upper bounds
and sampling-rate lower bounds under correlated samples, and sparse
recovery experiments comparing extended matrices against plain ones.

Modules
-------
permgroup   permutation-sequence groups describing extended rows
sampler     matrix generation, sampling, sub-period accumulation
covariance  block covariance structure, determinants, spectra
bounds      capacity upper bounds and sampling-rate lower bounds
recovery    greedy / shrinkage decoders and distortion experiments
cli         command line front end
"""

__version__ = "0.1.0"

from . import bounds, covariance, permgroup, recovery, sampler  # noqa: F401
