# siplb/io/__init__.py
from .instance_file import load_instance, read_instance, to_file_text
from .trace import save_trace, trace_rows, write_trace

__all__ = [
    'load_instance',
    'read_instance',
    'to_file_text',
    'save_trace',
    'trace_rows',
    'write_trace',
]
