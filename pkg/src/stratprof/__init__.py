"""Rationality of finite and infinite strategy profiles in dyadic games."""

from .core import (
    Divergent,
    Internal,
    InvalidNode,
    InvalidProfile,
    Leaf,
    Profile,
    ProfileBuilder,
    UtilityAssignment,
    build_internal,
    build_leaf,
    outcome_leaf,
    same_game,
    same_profile,
    subprofile,
    utility_assignment,
)
from .engine import (
    Verdict,
    always_convergent,
    convergent,
    divergent,
    pe,
    rat_inf,
    spe,
)
from .finite import aumann_equivalence, bi, enumerate_profiles, rat_f
from .comb import (
    Affine,
    Cap,
    CombChoiceWord,
    CombSpec,
    Const,
    Geo,
    comb_divergent,
    comb_rat_inf,
    comb_spe,
    to_profile,
)
from .families import EndingOption, FamilyBundle, build_family, unfold
from .textio import ParseError, parse_profile, serialize_profile

__version__ = "0.1.0"
