"""Cross-validation oracles: dense bridge, random corpus, continuous example"""
from .bridge import (CheckResult, LambdaAgreement, matrix_of_system, operator_of_system,
                     xcheck_lambda, xcheck_operator_formulas, xcheck_kernels,
                     xcheck_range_support, xcheck_bridge_isometry, xcheck_Jn,
                     xcheck_closed_range, xcheck_douglas, xcheck_coordinates)
from .corpus import (CorpusSummary, random_system, generate_corpus, validate_system,
                     validate_corpus)
from .continuous_example import (QuadratureGrid, ContinuousReport, continuous_example_check,
                                 measure_J, criterion_on_grid)

__all__ = ['CheckResult', 'LambdaAgreement', 'matrix_of_system', 'operator_of_system',
           'xcheck_lambda', 'xcheck_operator_formulas', 'xcheck_kernels', 'xcheck_range_support',
           'xcheck_bridge_isometry', 'xcheck_Jn', 'xcheck_closed_range', 'xcheck_douglas',
           'xcheck_coordinates', 'CorpusSummary', 'random_system', 'generate_corpus',
           'validate_system', 'validate_corpus', 'QuadratureGrid', 'ContinuousReport',
           'continuous_example_check', 'measure_J', 'criterion_on_grid']
