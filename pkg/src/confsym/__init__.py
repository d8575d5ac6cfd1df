"""confsym: numerical verification of moment-map convexity on conformal
symplectic manifolds.

Layers: ``numerics`` (tensors, hulls, eigensolvers, rationals), ``cartan``
(twisted calculus by finite differences), ``liegroups`` (duals, chambers,
coadjoint action, rescaling), ``scenarios`` (the manifold catalog),
``momentbody`` (clouds, bodies, cone relations, the check suite), and
``cli`` (the configuration-driven runner).
"""

__version__ = "0.1.0"

from . import cartan, liegroups, momentbody, numerics, rng, scenarios  # noqa: F401
