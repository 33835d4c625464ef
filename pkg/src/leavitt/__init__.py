"""Exact symbolic computation in Leavitt rings, their matrix rings, and
the Brin-Higman-Thompson groups, with constructive isomorphisms and the
classical invariants (germ groups, conjugacy-class counts)."""

from .core import (Letter, MatrixUnit, RingElement, Shape, degree_profile,
                   involute, letter_element, mono_one, normalize, recolor,
                   scalar, scalar_times, zero)
from .dynamics import (Aperiodic, Point, Rational, STREAMS, act, cc_closed_form,
                       cc_count, germ, germ_rank, germ_shift)
from .errors import (LeavittError, NoIsomorphismError, NotFixedError,
                     NotPositiveUnitaryError, NotUnitaryError, ParseError,
                     ShapeError)
from .isomorphisms import (AapData, Homomorphism, aap_data, aap_hom,
                           aap_inverse_hom, apply_hom, compose_hom,
                           extend_entrywise, extend_tensor, gcd_iso,
                           identity_hom, kaplansky_unit, orbit_rep,
                           rect_conjugation_iso, verify_hom)
from .matrices import (UnitaryWitness, block_place, direct_sum, identity,
                       is_unitary, matrix_unit, row_of_y)
from .textio import (format_element, format_matrix, format_point, hom_from_json,
                     hom_to_json, leafset_from_json, leafset_to_json,
                     parse_any_element, parse_element, parse_matrix,
                     parse_point, treepair_from_json, treepair_to_json)
from .thompson import (Leaf, LeafSet, TreePair, compose, equals, expand,
                       from_matrix, identity_pair, inverse, is_basis,
                       is_unitary_set, leaf_column, multi_homogenize,
                       random_basis, random_pair, root_basis, to_matrix)

__version__ = "0.1.0"
