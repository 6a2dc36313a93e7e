"""Computing with diffeological quasifolds.

Exact Q+Qα arithmetic and countable affine groups, structure groupoids of
quasifold atlases, counting-measure convolution *-algebras with their matrix
representations, equivalence bimodules between atlases of the same quasifold,
and an affine lifting lab for maps between quotients.
"""

from .algebra import (AlgebraElement, CircleModel, ComplexMatrix, LineModel,
                      REPRESENTATION_PRODUCT_ORDER, convolve_closed_form,
                      convolve_general, delta, involute,
                      matrix_representation, rotation_relation)
from .atlas import (AssemblyReport, Atlas, build_groupoid, Chart, CircleArrow,
                    Interval, phi_arrow, phi_object, QuasifoldPointHandle,
                    StructureGroupoid, Transition)
from .bimodule import (BiAtlas, class_map, generate_germs, left_act,
                       LinkingGerm, quotient_witness, quotient_witness_right,
                       right_act, source_probe, surjectivity_probe)
from .coefficients import PiecewisePoly, TrigPoly
from .exact import (AffineElement, AlphaWitness, compare, default_witness,
                    QAlpha, qa, set_default_witness, Trit)
from .groupoid import (Arrow, arrow_compose, arrow_invert, fiber_over,
                       NebulaPoint)
from .groups import (enumerate_group, FiniteMatrixGroup, GeneratedGroup,
                     GroupPresentation, membership_status, orbit_witness,
                     RationalTranslations, TranslationLattice)
from .lifting import (AffineFit, AffinePieceReport, detect_pieces, flip_map,
                      lift_diffeo, nonliftable_demo, reconstruct_affine,
                      SampledMap)

__version__ = "0.1.0"
