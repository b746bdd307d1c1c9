"""
Utils package for report formatting and file output.
"""

from .file_io import write_csv, write_json, write_text_atomic
from .report_formatter import ReportFormatter

__all__ = [
    'write_csv',
    'write_json',
    'write_text_atomic',
    'ReportFormatter'
]
