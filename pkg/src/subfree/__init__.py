"""Edge deletion towards forbidden-subgraph-free graphs on layered inputs.

Submodules: ``graph`` (graphs, patterns, subgraph search), ``treewidth``,
``dp`` (tree-decomposition solver), ``oracle``, ``layering`` (window
framework), ``disks`` (arrangements of disks), ``hardness`` (gadgets and the
1-in-3 reduction), ``acceptance`` and ``cli``.
"""

__version__ = "0.1.0"
