"""
Domain-neutral helpers shared by the qred tasks: file and report I/O, integer and tolerance arithmetic, data
reshaping and argument parsing.
"""
