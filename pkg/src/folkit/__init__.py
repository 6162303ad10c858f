"""folkit: a first-order logic workbench.

De Bruijn syntax with parallel substitution, five checkable deduction
calculi with derivation transformers, semantic (NBE) cut-elimination,
finite Tarski/Kripke/Heyting semantics with countermodel search, a binary
tree-to-theory encoder, and Lorenzen dialogue games with playable
strategies.
"""

__version__ = "0.1.0"
