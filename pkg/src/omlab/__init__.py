"""omlab: a desk-scale lab for ontological models of quantum theory.

Subpackages cover exact qubit linear algebra (:mod:`omlab.quantum`), the
finite ontological-models framework (:mod:`omlab.models`), the toy theory
(:mod:`omlab.toy`), constraint-based no-go analyses (:mod:`omlab.pbr`,
:mod:`omlab.hardy`), epistemically restricted Liouville mechanics
(:mod:`omlab.gaussian`) and the reporting CLI (:mod:`omlab.cli`).
"""

__version__ = "0.1.0"
