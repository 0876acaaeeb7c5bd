"""Shape fitting strategies.

This package is not designed to be imported from directly; rather,
fitters should be loaded using :py:func:`harmonic_nav.get_fitter`.
"""
