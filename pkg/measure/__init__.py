"""Discrete measure spaces and fiber kernels"""
from .discrete_space import (DiscreteMeasureSpace, Transformation, Support,
                             as_real_function, pushforward_density, radon_nikodym_h,
                             radon_nikodym_hn, conditional_expectation, support_of,
                             relative_support)

__all__ = ['DiscreteMeasureSpace', 'Transformation', 'Support', 'as_real_function',
           'pushforward_density', 'radon_nikodym_h', 'radon_nikodym_hn',
           'conditional_expectation', 'support_of', 'relative_support']
