"""Cobordism-like modules of maps to the line or circle, via labeled Reeb graphs."""

from .ccmod import CCData, cc, direct_sum_check, quotient
from .exactlin import (INTEGERS, RATIONALS, CoefficientRing, Element, Membership, Presentation,
                       Span, cokernel_presentation, integers_mod, membership, smith_normal_form)
from .fileformat import load, parse, serialize, to_dot
from .product import (case2, cf, connect_all, generator_set_S, product_with_bundle,
                      strand_swap)
from .reeb import (CIRCLE, LINE, ReebGraph, fiber_labels, h1, level_set, validate,
                   vertex_relation)
from .symbols import Atom, ManifoldClass, RewriteRule, SymbolTable, canonicalize, product
from .verify import check_thm1, check_thm2, induced_hom, random_reeb_graph

__version__ = "0.1.0"
