"""Free groups, stars of free groups, towers and the basic imaginary sorts.

The modules are layered:

* :mod:`fgtowers.words` -- reduced words, cyclic reduction, roots, conjugacy;
* :mod:`fgtowers.rational` -- automata for rational subsets, Benois saturation;
* :mod:`fgtowers.imaginaries` -- the relations E1, E2 and E3 with class keys;
* :mod:`fgtowers.stars` -- normal forms and orbit counting in stars of groups;
* :mod:`fgtowers.towers` -- towers, multiplets, pouches and closures;
* :mod:`fgtowers.noncomm` -- swap automorphisms against candidate operations;
* :mod:`fgtowers.cli` -- the ``fgtowers`` command.
"""
from .words import FreeGroup, Word, parse_word

__all__ = ["FreeGroup", "Word", "parse_word"]
__version__ = "0.1.0"
