"""Counting real lines on real projective hypersurfaces of degree 2n-1."""

try:
    # Installed layout: the extension lives inside this package.
    from ._reallines import (
        double_factorial,
        enumerate_lines,
        fixture_terms,
        n_complex,
        n_complex_oracle,
        residue_table,
        zagier_log_ratio,
    )
except ImportError:
    # Build-tree layout: the extension sits on sys.path by itself.
    from _reallines import (
        double_factorial,
        enumerate_lines,
        fixture_terms,
        n_complex,
        n_complex_oracle,
        residue_table,
        zagier_log_ratio,
    )

__all__ = [
    "double_factorial",
    "enumerate_lines",
    "fixture_terms",
    "n_complex",
    "n_complex_oracle",
    "residue_table",
    "zagier_log_ratio",
]
