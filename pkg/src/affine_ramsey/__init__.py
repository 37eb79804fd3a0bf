"""Affine largeness, sum-product configurations and their finite models over LIDs."""

__version__ = "0.1.0"

from .affine import AffineMap, compose, format_map, maps_of_height, parse_map  # noqa: E402
from .constructions import BlockSet, build_example45, build_thickbad, verify_no_pattern  # noqa: E402
from .errors import AffineRamseyError  # noqa: E402
from .finite_models import (  # noqa: E402
    FiniteSemigroup,
    build_affine_semigroup,
    idempotents,
    minimal_left_ideals,
    multiplicative_semigroup,
    return_sets,
)
from .largeness import (  # noqa: E402
    FolnerSpec,
    check_syndetic_certificate,
    density,
    find_syndetic_certificate,
    find_thick_witness,
    finite_sums,
    folner_sets,
)
from .patterns import (  # noqa: E402
    Coloring,
    PatternKind,
    find_monochromatic,
    minimal_ramsey_window,
    multsyndetic_pattern_check,
    pattern_kind,
    sumproduct_in_set,
)
from .rings import Q, Z, ideal_index, non_amenability_witness, parse_ring  # noqa: E402
from .setexpr import ExprSet, eval_set_expr, parse_set_expr, to_text  # noqa: E402
from .windows import WindowSet, WindowSpec, parse_window  # noqa: E402
