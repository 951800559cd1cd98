"""Certificate records shared by the operator analyses"""
from .certificate import (Certificate, CertificateKind, SCOPE_EXACT, SCOPE_PREFIX,
                          SCOPE_TAIL_ASSERTED, INFINITY_TOKEN, encode_number, decode_number)

__all__ = ['Certificate', 'CertificateKind', 'SCOPE_EXACT', 'SCOPE_PREFIX',
           'SCOPE_TAIL_ASSERTED', 'INFINITY_TOKEN', 'encode_number', 'decode_number']
