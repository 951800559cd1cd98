"""Finite-dimensional operators: λ-hyponormality, Douglas factorization, orbit growth"""
from .matrix_operator import (MatrixOperator, FactorizationResult, adjoint, vector_norm,
                              operator_norm, is_lambda_hyponormal, kernel_inclusion,
                              minimal_lambda, douglas_factor)
from .orbit import (LambdaSequence, OrbitBoundCheck, lambda_sequence, orbit_norms,
                    orbit_bound_check, auto_growth_constant, growth_certificate,
                    weakly_closed_orbit_certificate)
from .analysis import (OperatorReport, analyze_operator, not_weakly_hypercyclic_certificate,
                       verify_operator_certificate)

__all__ = ['MatrixOperator', 'FactorizationResult', 'adjoint', 'vector_norm', 'operator_norm',
           'is_lambda_hyponormal', 'kernel_inclusion', 'minimal_lambda', 'douglas_factor',
           'LambdaSequence', 'OrbitBoundCheck', 'lambda_sequence', 'orbit_norms',
           'orbit_bound_check', 'auto_growth_constant', 'growth_certificate',
           'weakly_closed_orbit_certificate', 'OperatorReport', 'analyze_operator',
           'not_weakly_hypercyclic_certificate', 'verify_operator_certificate']
