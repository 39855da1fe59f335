"""Inverse design of 2-D dielectric maps for dissipative entanglement of
driven quantum emitters.

The package is organised in four layers:

* quantum dynamics (`states`, `params`, `liouvillian`, `cavity`, `dynamics`,
  `metrics`): driven-dissipative master equations in units of the free-space
  decay rate, steady states, transients, spectral gaps and entanglement
  metrics;
* electromagnetics (`greens`, `fdfd`, `couplings`): a 2-D scalar
  frequency-domain Helmholtz solver with PML, and the conversion of sampled
  Green's functions into master-equation couplings;
* optimisers (`topopt`, `pso`, `wopt`): the permittivity-increment design
  loop and a constrained particle swarm over master-equation parameters;
* orchestration (`config`, `tomography`, `runner`, `cli`).
"""

__version__ = "0.1.0"

from .states import bell_state, w_state
from .params import MasterEqParams
from .liouvillian import build_liouvillian
from .dynamics import steady_state, evolve, liouvillian_gap
from .metrics import fidelity, purity, partial_trace, concurrence

__all__ = [
    "__version__",
    "bell_state",
    "w_state",
    "MasterEqParams",
    "build_liouvillian",
    "steady_state",
    "evolve",
    "liouvillian_gap",
    "fidelity",
    "purity",
    "partial_trace",
    "concurrence",
]
