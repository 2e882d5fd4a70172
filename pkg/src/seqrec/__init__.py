"""seqrec: exact-arithmetic toolkit for recursion structure in base-k
integer sequences.

Subpackages: ratlin (exact linear solving), dfao (automata with output),
corpus (built-in sequence oracles), recsolve (scheme fit/verify/search and
refutations), strongderive (subsequence equalities from reach sets),
syncverify (two-track recognizers), cli (command line).
"""

__version__ = "0.1.0"
