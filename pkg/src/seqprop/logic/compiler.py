"""Compilation of first-order formulas to automata.

The construction is standard: linear atoms become deficit automata from
the numeration module, sequence atoms become lockstep runs of the bound
Dfaos, connectives become products, quantifiers become projections (with
universal quantification as negate-project-negate).  Every intermediate
result is minimized; for Zeckendorf queries, validity is intersected at
each atom and before each projection so quantified witnesses range over
values rather than arbitrary digit strings.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import numeration, sequences
from ..automata import (Alphabet, Dfa, Dfao, complement, cylindrify,
                        empty_dfa, full_dfa, is_empty, minimize, product,
                        project)
from .ast import (Add, And, Compare, Const, Exists, Forall, Formula, Iff,
                  Implies, Not, Or, SeqCompare, SeqRef, Sub, Var, free_vars,
                  linear_form)
from .library import PredicateLibrary, expand, stdlib
from .parser import parse


class CompileError(ValueError):
    pass


@dataclass(frozen=True)
class CompiledFormula:
    """Automaton over the formula's free variables, alphabetically ordered."""

    dfa: Dfa
    variables: tuple[str, ...]
    system: numeration.NumerationSystem

    def accepts(self, values) -> bool:
        if len(values) != len(self.variables):
            raise ValueError("value tuple does not match the free variables")
        if not self.variables:
            return not is_empty(self.dfa)[0]
        return self.dfa.run(numeration.encode_tuple(values, self.system).digits)

    def enumerate(self, bound: int):
        from ..automata import enumerate_accepted
        return enumerate_accepted(self.dfa, self.system, bound)


@dataclass(frozen=True)
class DecideResult:
    truth: bool
    witness: dict | None
    counterexample: dict | None


_CMP_GROUND = {
    "=": lambda a, b: a == b, "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b, "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b, ">=": lambda a, b: a >= b,
}


class Compiler:
    def __init__(self, system: numeration.NumerationSystem, binding,
                 library: PredicateLibrary | None = None):
        self.system = system
        self.library = library if library is not None else stdlib()
        self.side = "msd" if system.msd_first else "lsd"
        self.binding: dict[str, Dfao] = {}
        for symbol, target in (binding or {}).items():
            self.binding[symbol] = self._resolve(target)
        self._cache: dict = {}
        self._validity: dict[int, Dfa] = {}
        self._fresh = 0

    def _resolve(self, target) -> Dfao:
        if isinstance(target, Dfao):
            d = target
        elif isinstance(target, str) or isinstance(target, sequences.BuiltinSequence):
            seq = sequences.get(target) if isinstance(target, str) else target
            if (seq.system.kind, seq.system.base) != (self.system.kind, self.system.base):
                raise CompileError(
                    f"sequence {seq.name} lives in {seq.system.describe()}, "
                    f"query uses {self.system.describe()}")
            d = seq.dfao(self.system.msd_first)
        else:
            raise CompileError(f"cannot bind {target!r}")
        if d.alphabet.ranges != (self.system.digit_range,):
            raise CompileError("bound automaton disagrees with the digit alphabet")
        return d

    # -- helpers -------------------------------------------------------------

    @property
    def _is_zeck(self) -> bool:
        return self.system.kind == numeration.ZECKENDORF

    def _validity_dfa(self, arity: int) -> Dfa:
        if arity not in self._validity:
            self._validity[arity] = numeration.validity_automaton(
                self.system, arity)
        return self._validity[arity]

    def _ground(self, truth: bool):
        alpha = Alphabet(())
        return (full_dfa(alpha) if truth else empty_dfa(alpha)), ()

    def _widen(self, dfa, dvars, union):
        if dvars == union:
            return dfa
        ranges = (self.system.digit_range,) * len(union)
        positions = tuple(union.index(v) for v in dvars)
        return cylindrify(dfa, positions, ranges)

    def _apply(self, op, a, avars, b, bvars):
        union = tuple(sorted(set(avars) | set(bvars)))
        a = self._widen(a, avars, union)
        b = self._widen(b, bvars, union)
        return minimize(product(a, b, op)), union

    def _project_out(self, dfa, dvars, v):
        if v not in dvars:
            return dfa, dvars
        coord = dvars.index(v)
        if self._is_zeck:
            dfa = minimize(product(dfa, self._validity_dfa(len(dvars)), "and"))
        dfa = minimize(project(dfa, coord, self.side))
        return dfa, tuple(x for x in dvars if x != v)

    def _fresh_var(self) -> str:
        # NUL prefix keeps internal names disjoint from anything parseable
        self._fresh += 1
        return f"\x00w{self._fresh}"

    # -- atoms ---------------------------------------------------------------

    def _lin_atom(self, coeffs: dict, rel: str, const: int):
        """Automaton for sum(coeffs . vars) rel const."""
        coeffs = {v: c for v, c in coeffs.items() if c}
        if not coeffs:
            return self._ground(_CMP_GROUND[rel](0, const))
        if rel == "!=":
            dfa, dvars = self._lin_atom(coeffs, "=", const)
            return complement(dfa), dvars
        if rel == ">":
            return self._lin_atom({v: -c for v, c in coeffs.items()}, "<", -const)
        if rel == ">=":
            return self._lin_atom({v: -c for v, c in coeffs.items()}, "<=", -const)
        dvars = tuple(sorted(coeffs))
        dfa = numeration.linear_automaton(
            tuple(coeffs[v] for v in dvars), const, rel, self.system)
        return dfa, dvars

    def _compare(self, f: Compare):
        lc, lk = linear_form(f.left)
        rc, rk = linear_form(f.right)
        coeffs = dict(lc)
        for v, c in rc.items():
            coeffs[v] = coeffs.get(v, 0) - c
        return self._lin_atom(coeffs, f.rel, rk - lk)

    def _dfao_of(self, symbol: str, pos) -> Dfao:
        if symbol not in self.binding:
            raise CompileError(f"sequence symbol {symbol!r} is not bound")
        return self.binding[symbol]

    def _run_value_dfa(self, dfao: Dfao, accept) -> Dfa:
        acc = frozenset(q for q in range(dfao.n_states) if accept(dfao.outputs[q]))
        return Dfa(dfao.alphabet, dfao.transitions, dfao.initial, acc)

    def _run_pair_dfa(self, d1: Dfao, d2: Dfao, equal: bool) -> Dfa:
        """Lockstep run over a pair (v1, v2); component 0 feeds d1."""
        k = self.system.digit_range
        alpha = Alphabet((k, k))
        n2 = d2.n_states
        trans = []
        for q1 in range(d1.n_states):
            for q2 in range(n2):
                row = []
                for a in range(k):
                    for b in range(k):
                        row.append(d1.transitions[q1][a] * n2 + d2.transitions[q2][b])
                trans.append(tuple(row))
        acc = frozenset(
            q1 * n2 + q2
            for q1 in range(d1.n_states) for q2 in range(n2)
            if (d1.outputs[q1] == d2.outputs[q2]) == equal
        )
        return Dfa(alpha, tuple(trans), d1.initial * n2 + d2.initial, acc)

    def _run_pair_same_var(self, d1: Dfao, d2: Dfao, equal: bool) -> Dfa:
        k = self.system.digit_range
        alpha = Alphabet((k,))
        n2 = d2.n_states
        trans = []
        for q1 in range(d1.n_states):
            for q2 in range(n2):
                trans.append(tuple(
                    d1.transitions[q1][d] * n2 + d2.transitions[q2][d]
                    for d in range(k)))
        acc = frozenset(
            q1 * n2 + q2
            for q1 in range(d1.n_states) for q2 in range(n2)
            if (d1.outputs[q1] == d2.outputs[q2]) == equal
        )
        return Dfa(alpha, tuple(trans), d1.initial * n2 + d2.initial, acc)

    def _realize_index(self, term):
        """Turn an index term into (variable, defining atoms, fresh names)."""
        coeffs, const = linear_form(term)
        if len(coeffs) == 1 and const == 0 and next(iter(coeffs.values())) == 1:
            return next(iter(coeffs)), [], []
        u = self._fresh_var()
        coeffs = dict(coeffs)
        coeffs[u] = -1
        return u, [self._lin_atom(coeffs, "=", -const)], [u]

    def _intersect_validity(self, dfa, dvars):
        if self._is_zeck and dvars:
            dfa = minimize(product(dfa, self._validity_dfa(len(dvars)), "and"))
        return dfa

    def _seq_compare(self, f: SeqCompare):
        equal = f.rel == "="
        left, right = f.left, f.right
        if not isinstance(left, SeqRef) and not isinstance(right, SeqRef):
            return self._ground((left == right) == equal)
        if not isinstance(left, SeqRef):
            left, right = right, left
        defs, fresh = [], []
        d1 = self._dfao_of(left.symbol, left.pos)
        v1, extra, new = self._realize_index(left.index)
        defs.extend(extra)
        fresh.extend(new)
        if isinstance(right, SeqRef):
            d2 = self._dfao_of(right.symbol, right.pos)
            v2, extra, new = self._realize_index(right.index)
            defs.extend(extra)
            fresh.extend(new)
            if v1 == v2:
                if left.symbol == right.symbol:
                    return self._ground(equal)
                run = self._run_pair_same_var(d1, d2, equal)
                run_vars = (v1,)
            else:
                if v1 < v2:
                    run = self._run_pair_dfa(d1, d2, equal)
                    run_vars = (v1, v2)
                else:
                    run = self._run_pair_dfa(d2, d1, equal)
                    run_vars = (v2, v1)
        else:
            want = right
            run = self._run_value_dfa(d1, (lambda o: o == want) if equal
                                      else (lambda o: o != want))
            run_vars = (v1,)
        dfa = minimize(self._intersect_validity(run, run_vars))
        dvars = run_vars
        for ddfa, ddvars in defs:
            dfa, dvars = self._apply("and", dfa, dvars, ddfa, ddvars)
        for u in fresh:
            dfa, dvars = self._project_out(dfa, dvars, u)
        return dfa, dvars

    # -- formulas ------------------------------------------------------------

    def _rec(self, f: Formula):
        cached = self._cache.get(f)
        if cached is not None:
            return cached
        if isinstance(f, Compare):
            out = self._compare(f)
            out = (self._intersect_validity(out[0], out[1]), out[1])
        elif isinstance(f, SeqCompare):
            out = self._seq_compare(f)
        elif isinstance(f, Not):
            dfa, dvars = self._rec(f.operand)
            out = (complement(dfa), dvars)
        elif isinstance(f, (And, Or, Implies, Iff)):
            op = {And: "and", Or: "or", Implies: "implies", Iff: "iff"}[type(f)]
            a, avars = self._rec(f.left)
            b, bvars = self._rec(f.right)
            out = self._apply(op, a, avars, b, bvars)
        elif isinstance(f, Exists):
            dfa, dvars = self._rec(f.body)
            out = self._project_out(dfa, dvars, f.var)
        elif isinstance(f, Forall):
            dfa, dvars = self._rec(f.body)
            if f.var not in dvars:
                out = (dfa, dvars)
            else:
                dfa, dvars = self._project_out(complement(dfa), dvars, f.var)
                out = (complement(dfa), dvars)
        else:
            raise CompileError(f"cannot compile {type(f).__name__}")
        self._cache[f] = out
        return out

    def compile(self, formula) -> CompiledFormula:
        if isinstance(formula, str):
            formula = parse(formula)
        formula = expand(formula, self.library)
        dfa, dvars = self._rec(formula)
        dfa = minimize(self._intersect_validity(dfa, dvars))
        return CompiledFormula(dfa, dvars, self.system)

    def decide(self, sentence) -> DecideResult:
        if isinstance(sentence, str):
            sentence = parse(sentence)
        expanded = expand(sentence, self.library)
        fv = free_vars(expanded)
        if fv:
            raise CompileError(
                f"sentence has free variables: {', '.join(sorted(fv))}")
        compiled = self.compile(expanded)
        truth = not is_empty(compiled.dfa)[0]
        witness = counterexample = None
        kind, block, matrix = _leading_block(expanded)
        if block:
            if truth and kind == "exists":
                witness = self._shortest_model(matrix, block)
            elif not truth and kind == "forall":
                counterexample = self._shortest_model(Not(matrix), block)
        return DecideResult(truth, witness, counterexample)

    def _shortest_model(self, formula, block) -> dict | None:
        compiled = self.compile(formula)
        empty, wit = is_empty(compiled.dfa)
        if empty:
            return None
        values = numeration.decode_tuple(wit, len(compiled.variables), self.system)
        model = dict(zip(compiled.variables, values))
        # variables absent from the matrix automaton are unconstrained
        for v in block:
            model.setdefault(v, 0)
        return model


def _leading_block(f):
    kind = None
    block = []
    while isinstance(f, (Exists, Forall)):
        here = "exists" if isinstance(f, Exists) else "forall"
        if kind is None:
            kind = here
        elif kind != here:
            break
        block.append(f.var)
        f = f.body
    return kind, block, f


def compile_formula(formula, sequence=None, system=None, binding=None,
                    library=None, msd_first=True) -> CompiledFormula:
    """Convenience wrapper: bind symbol T to a built-in sequence."""
    compiler = make_compiler(sequence, system, binding, library, msd_first)
    return compiler.compile(formula)


def decide(sentence, sequence=None, system=None, binding=None,
           library=None, msd_first=True) -> DecideResult:
    compiler = make_compiler(sequence, system, binding, library, msd_first)
    return compiler.decide(sentence)


def make_compiler(sequence=None, system=None, binding=None, library=None,
                  msd_first=True) -> Compiler:
    if binding is None:
        if sequence is None:
            raise CompileError("either a sequence or a binding is required")
        binding = {"T": sequence}
    if system is None:
        names = list(binding.values())
        first = names[0]
        seq = sequences.get(first) if isinstance(first, str) else first
        if isinstance(seq, sequences.BuiltinSequence):
            base_system = seq.system
        else:
            raise CompileError("an explicit system is required with raw Dfaos")
        system = numeration.NumerationSystem(
            base_system.kind, base_system.base, msd_first)
    return Compiler(system, binding, library)
