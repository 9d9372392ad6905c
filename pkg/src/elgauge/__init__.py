"""Extended lattice gauge fields on triangle-dual cell complexes.

Submodules:

- ``abelian``  -- exact integer linear algebra (Smith normal form, kernels, homology)
- ``complex``  -- simplicial complexes and their dual cell decompositions
- ``groups``   -- gauge group models (U(1), Z_N, SU(2)) and homotopy labels
- ``gauge``    -- cellular networks and standard lattice gauge fields
- ``elgf``     -- extended fields, deck groups and bundle classification
- ``pachner``  -- bistellar moves and field transport
- ``thooft``   -- 't Hooft loop operator, Seifert chains, gerbe data
"""

__version__ = "0.1.0"
