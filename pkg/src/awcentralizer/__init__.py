"""Exact verification of the Askey-Wilson description of U_q(sl2) centralizers.

Submodules, bottom-up: scalars, matrices, quantum_rep, spin_combinatorics,
aw_symbolic, word_quotient, centralizer, representations, diagram_iso and
the command-line front end in cli.
"""

__version__ = "0.1.0"
