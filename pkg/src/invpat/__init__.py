"""Exact enumeration of pattern-avoiding permutations and inversion
sequences, with matching truncated-series identities.

The package is organized as:

* :mod:`invpat.core`         -- domain objects and statistics;
* :mod:`invpat.patterns`     -- equality-aware pattern containment;
* :mod:`invpat.enumeration`  -- pruned generators, distributions, tables, cache;
* :mod:`invpat.series`       -- exact truncated power series and solvers;
* :mod:`invpat.bijections`   -- constructive correspondences with inverses;
* :mod:`invpat.verify`       -- the named identity checks;
* :mod:`invpat.cli`          -- the ``invpat`` command line front end.
"""

from .core import (
    UNBOUNDED,
    DistPoly,
    Extremes,
    Permutation,
    ShapedSequence,
    alt,
    alt_word,
    asc,
    asc_des,
    des,
    dist,
    eulerian,
    exc,
    iar,
    iasc,
    ides,
    inverse,
    lar_sma,
    lmi,
    lr_word,
    rma,
    tig,
)
from .patterns import (
    Pattern,
    PatternError,
    avoids_all,
    first_occurrence,
    occurs,
    parse_pattern,
    parse_patterns,
)
from .enumeration import (
    FamilySpec,
    SpecError,
    count,
    distribution,
    generate,
    joint_distribution,
    quadvariate_G_table,
    tig_H_table,
    trivariate_N_table,
)
from .series import (
    MultiSeries,
    SeriesError,
    TruncationError,
    a_n_lagrange,
    poly_in,
    solve_A,
    solve_N,
    solve_r,
)

__version__ = "0.1.0"
