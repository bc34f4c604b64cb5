from . import alpha_sweep, posterior, scaling, shift, singledraw

BUILDERS = {
    "posterior": posterior,
    "scaling": scaling,
    "shift": shift,
    "alpha": alpha_sweep,
    "singledraw": singledraw,
}

__all__ = ["BUILDERS"]
