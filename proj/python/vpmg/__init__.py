"""Python access to the vertex-patch multigrid experiments."""

try:
    from . import _vpmg
except ImportError:  # build tree: the extension sits next to the package
    import _vpmg

solve = _vpmg.solve
table = _vpmg.table
bank = _vpmg.bank
partition = _vpmg.partition
fractional_iterations = _vpmg.fractional_iterations
parse_int_list = _vpmg.parse_int_list
AlreadyConverged = _vpmg.AlreadyConverged

__all__ = [
    "solve",
    "table",
    "bank",
    "partition",
    "fractional_iterations",
    "parse_int_list",
    "AlreadyConverged",
]
