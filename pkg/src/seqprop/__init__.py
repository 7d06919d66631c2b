"""seqprop: first-order decision engine and counting toolkit for automatic sequences."""

from . import automata, counting, logic, numeration, oracle, sequences

__all__ = ["automata", "counting", "logic", "numeration", "oracle", "sequences"]
__version__ = "0.1.0"
