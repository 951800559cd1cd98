"""Weighted composition operators and their analysis"""
from .operator import (WeightedCompositionSystem, apply_W, apply_W_star, apply_WW_star,
                       apply_W_power, compute_J, compute_modulus, compute_u_n,
                       compute_Jn_recursive, compute_Jn_direct, compute_Jn_table)
from .analysis import (AnalysisReport, CriterionResult, ClosedRangeResult, analyze_system,
                       hyponormality_criterion, closed_range_check, kernel_inclusion_check,
                       range_star_support, hypercyclicity_certificate,
                       verify_system_certificate)

__all__ = ['WeightedCompositionSystem', 'apply_W', 'apply_W_star', 'apply_WW_star',
           'apply_W_power', 'compute_J', 'compute_modulus', 'compute_u_n',
           'compute_Jn_recursive', 'compute_Jn_direct', 'compute_Jn_table', 'AnalysisReport',
           'CriterionResult', 'ClosedRangeResult', 'analyze_system', 'hyponormality_criterion',
           'closed_range_check', 'kernel_inclusion_check', 'range_star_support',
           'hypercyclicity_certificate', 'verify_system_certificate']
