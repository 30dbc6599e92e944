"""Report generation modules."""

from .markdown import MarkdownReportGenerator, format_console_table, metrics_table

__all__ = ['MarkdownReportGenerator', 'format_console_table', 'metrics_table']
