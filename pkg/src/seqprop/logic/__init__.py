"""Predicate language: parser, macro library, compiler to automata."""

from .ast import (Add, And, Call, Compare, Const, Exists, Forall, Formula,
                  Iff, Implies, Mul, Not, Or, SeqCompare, SeqRef, Sub, Term,
                  Var, free_vars)
from .compiler import (CompileError, CompiledFormula, Compiler, DecideResult,
                       compile_formula, decide, make_compiler)
from .library import (LibraryError, PredicateLibrary, expand, parse_library,
                      stdlib)
from .parser import ParseError, parse, parse_term

__all__ = [
    "Add", "And", "Call", "Compare", "CompileError", "CompiledFormula",
    "Compiler", "Const", "DecideResult", "Exists", "Forall", "Formula",
    "Iff", "Implies", "LibraryError", "Mul", "Not", "Or", "ParseError",
    "PredicateLibrary", "SeqCompare", "SeqRef", "Sub", "Term", "Var",
    "compile_formula", "decide", "expand", "free_vars", "make_compiler",
    "parse", "parse_library", "parse_term", "stdlib",
]
