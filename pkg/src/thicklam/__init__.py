"""Desk-scale constructive machinery for thick (cobounded) laminations.

Subsystems:

- ``hypgraph``   -- hyperbolic-graph layer (Farey graph, free-group tree,
  interval backend) with exact distances, Gromov products, backtracking
  measurement and broken-geodesic certificates.
- ``traintrack`` -- combinatorial train tracks with exact rational
  transverse measures, splits, carrying matrices and model recognition.
- ``mcg``        -- mapping classes acting on curves, weights and tracks;
  finite symmetry sets; pseudo-Anosov detection on the torus.
- ``splitting``  -- splitting sequences and depth-N splitting packages for
  points and paths, with divide-property calibration.
- ``markov``     -- the three-stage Markov graph construction, limit-set
  sampling with thickness certificates, bridges, fans and the subshift
  encoding.
- ``thickpath``  -- inductive level sequences for thick paths, admissible
  limits and prefix-modulus certificates.
- ``flatsurf``   -- translation surfaces, saddle-connection census, the
  diagonal flow, slit covers and the expansion/vertical-saddle harness.
- ``cli``        -- batch front door with replayable certificate files.
"""

__version__ = "0.1.0"
