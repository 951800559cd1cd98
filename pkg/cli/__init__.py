"""Command line surface: documents, reports, examples and subcommands"""
from .commands import main, build_parser
from .documents import (TOOL_NAME, TOOL_VERSION, parse_document, load_json, input_digest,
                        verify_report)
from .examples import EXAMPLE_NAMES, example_document

__all__ = ['main', 'build_parser', 'TOOL_NAME', 'TOOL_VERSION', 'parse_document', 'load_json',
           'input_digest', 'verify_report', 'EXAMPLE_NAMES', 'example_document']
