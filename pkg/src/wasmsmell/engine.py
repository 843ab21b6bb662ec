"""Bounded path-sensitive walker over FlowGraphs.

Enumerates execution paths depth-first, keeping one symbolic store per
path. Registered checkers subscribe to call, branch, read, and
end-of-path events and emit findings; the engine owns all resource,
initialization, and null-constraint transitions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .cfg import (
    EDGE_BACK,
    EDGE_FALSE,
    EDGE_TRUE,
    Assign,
    CallStmt,
    CondBranch,
    DeclType,
    FlowGraph,
    Nop,
    ReturnStmt,
)
from .cparser import AstNode
from .lexer import Span
from .report import Finding

HEAP_ALLOCATORS = ("malloc", "calloc", "realloc")
FILE_OPENERS = ("fopen", "freopen")


class Resource(Enum):
    NONE = "none"
    HEAP = "heap-allocated"
    STACK = "stack-allocated"
    FREED = "freed"
    FILE_OPEN = "file-open"
    FILE_CLOSED = "file-closed"
    UNTRACKED = "untracked"


class Init(Enum):
    UNINIT = "uninit"
    INIT = "init"


class Null(Enum):
    UNKNOWN = "unknown"
    IS_NULL = "is-null"
    NON_NULL = "non-null"


@dataclass
class PathState:
    bindings: dict[str, int] = field(default_factory=dict)
    resource: dict[int, Resource] = field(default_factory=dict)
    init: dict[int, Init] = field(default_factory=dict)
    nullc: dict[int, Null] = field(default_factory=dict)
    konst: dict[int, int] = field(default_factory=dict)
    origin: dict[int, str] = field(default_factory=dict)
    derived: dict[int, tuple[int, int | None]] = field(default_factory=dict)
    fd_int: set[int] = field(default_factory=set)
    events: list[tuple[str, tuple[int, ...], Span]] = field(default_factory=list)
    flags: set[str] = field(default_factory=set)
    slices: dict[str, dict] = field(default_factory=dict)

    def clone(self) -> "PathState":
        return PathState(
            dict(self.bindings),
            dict(self.resource),
            dict(self.init),
            dict(self.nullc),
            dict(self.konst),
            dict(self.origin),
            dict(self.derived),
            set(self.fd_int),
            list(self.events),
            set(self.flags),
            {k: dict(v) for k, v in self.slices.items()},
        )

    def slice_for(self, checker_id: str) -> dict:
        return self.slices.setdefault(checker_id, {})


@dataclass
class Budget:
    max_paths: int = 4096
    unroll: int = 2


@dataclass
class BudgetReport:
    paths_explored: int = 0
    exhausted: bool = False
    skipped_sites: int = 0


class Checker:
    """Hook surface. Checkers keep per-path data in their state slice."""

    id = ""
    cwe: int | None = None
    tier = "flow"
    default_enabled = True
    message = ""

    def pre_call(self, ctx, state, callee, arg_syms, arg_exprs, span):
        pass

    def post_call(self, ctx, state, callee, arg_syms, result_sym, span):
        pass

    def branch_assumed(self, ctx, state, expr, taken, span):
        pass

    def variable_read(self, ctx, state, var, sym, span):
        pass

    def end_of_path(self, ctx, state):
        pass


class Engine:
    def __init__(self, fg: FlowGraph, checkers: list[Checker], budget: Budget):
        self.fg = fg
        self.checkers = checkers
        self.budget = budget
        self.findings: list[Finding] = []
        self._next_sym = 0

    # -- helpers ----------------------------------------------------------

    def fresh_sym(self) -> int:
        self._next_sym += 1
        return self._next_sym

    def decl_of(self, var: str) -> DeclType | None:
        return self.fg.symbols.get(var)

    def report(self, checker: Checker, span: Span, message: str, path_note: str | None = None):
        self.findings.append(
            Finding(
                checker=checker.id,
                cwe=checker.cwe,
                file="",
                line=span.line,
                col=span.col,
                message=message,
                path_note=path_note,
            )
        )

    def base_offset(self, state: PathState, sym: int) -> tuple[int, int | None]:
        seen = set()
        offset: int | None = 0
        while sym in state.derived and sym not in seen:
            seen.add(sym)
            base, k = state.derived[sym]
            if offset is None or k is None:
                offset = None
            else:
                offset += k
            sym = base
        return sym, offset

    def sym_of(self, state: PathState, expr: AstNode) -> int | None:
        """Resolve an expression to a symbol without raising read events."""
        while expr.kind == "Cast":
            expr = expr.children[0]
        if expr.kind == "Ident":
            return state.bindings.get(expr.name)
        return None

    def is_zero(self, state: PathState, expr: AstNode) -> bool:
        while expr.kind == "Cast":
            expr = expr.children[0]
        if expr.kind == "Literal":
            if expr.literal_kind == "null":
                return True
            try:
                return int(expr.value, 0) == 0
            except (ValueError, TypeError):
                return False
        sym = self.sym_of(state, expr)
        return sym is not None and state.konst.get(sym) == 0

    # -- expression evaluation ---------------------------------------------

    def new_value(self, state: PathState, origin: str = "", init: Init = Init.INIT) -> int:
        s = self.fresh_sym()
        state.init[s] = init
        if origin:
            state.origin[s] = origin
        return s

    def eval_expr(self, state: PathState, node: AstNode) -> int:
        kind = node.kind
        if kind == "Ident":
            name = node.name
            if name in state.bindings:
                sym = state.bindings[name]
            else:
                # global / undeclared identifier: bind lazily, assumed init
                sym = self.new_value(state, origin="extern")
                state.bindings[name] = sym
            if not name.startswith("%") and name in self.fg.symbols:
                for c in self.checkers:
                    c.variable_read(self, state, name, sym, node.span)
            return sym
        if kind == "Literal":
            sym = self.new_value(state, origin="literal")
            if node.literal_kind == "null":
                state.nullc[sym] = Null.IS_NULL
                state.konst[sym] = 0
            elif node.literal_kind == "int-literal":
                try:
                    state.konst[sym] = int(node.value, 0)
                except (ValueError, TypeError):
                    pass
            return sym
        if kind == "Cast":
            return self.eval_expr(state, node.children[0])
        if kind == "Unary":
            op = node.value
            if op == "&":
                inner = node.children[0]
                if inner.kind == "Ident" and inner.name in state.bindings:
                    target_sym = state.bindings[inner.name]
                    state.init[target_sym] = Init.INIT
                    state.resource[target_sym] = Resource.UNTRACKED
                sym = self.new_value(state, origin="address-of")
                state.nullc[sym] = Null.NON_NULL
                return sym
            if op in ("++", "--"):
                base = self.eval_expr(state, node.children[0])
                return self.derive(state, base, 1 if op == "++" else -1)
            operand = self.eval_expr(state, node.children[0])
            sym = self.new_value(state)
            if op == "-" and operand in state.konst:
                state.konst[sym] = -state.konst[operand]
            elif op == "!" and operand in state.konst:
                state.konst[sym] = int(state.konst[operand] == 0)
            return sym
        if kind == "Binary":
            op = node.value
            if op in ("+", "-"):
                lhs, rhs = node.children
                l = self.eval_expr(state, lhs)
                r = self.eval_expr(state, rhs)
                lp = self.is_pointerish_sym(state, lhs, l)
                rp = self.is_pointerish_sym(state, rhs, r)
                if lp and not rp:
                    k = state.konst.get(r)
                    return self.derive(state, l, (k if op == "+" else -k) if k is not None else None)
                if rp and not lp and op == "+":
                    k = state.konst.get(l)
                    return self.derive(state, r, k)
                sym = self.new_value(state)
                if l in state.konst and r in state.konst:
                    state.konst[sym] = (
                        state.konst[l] + state.konst[r]
                        if op == "+"
                        else state.konst[l] - state.konst[r]
                    )
                return sym
            syms = [self.eval_expr(state, c) for c in node.children]
            if op == ",":
                return syms[-1]
            return self.new_value(state)
        if kind == "Call":
            # calls are hoisted by lowering; a residual one is opaque
            for arg in node.children[1:]:
                self.eval_expr(state, arg)
            return self.new_value(state, origin=node.name or "call")
        # SkippedRegion or anything unexpected
        return self.new_value(state)

    def derive(self, state: PathState, base: int, offset: int | None) -> int:
        sym = self.fresh_sym()
        state.init[sym] = state.init.get(base, Init.INIT)
        state.derived[sym] = (base, offset)
        return sym

    def is_pointerish_sym(self, state: PathState, expr: AstNode, sym: int) -> bool:
        while expr.kind == "Cast":
            expr = expr.children[0]
        if expr.kind == "Ident":
            dt = self.decl_of(expr.name)
            if dt is not None and dt.pointerish:
                return True
        root, _ = self.base_offset(state, sym)
        return state.resource.get(root) in (
            Resource.HEAP,
            Resource.STACK,
            Resource.FILE_OPEN,
        )

    # -- transfer -----------------------------------------------------------

    def apply_transfer(self, state: PathState, stmt) -> PathState:
        if isinstance(stmt, Assign):
            self._transfer_assign(state, stmt)
        elif isinstance(stmt, CallStmt):
            self._transfer_call(state, stmt)
        elif isinstance(stmt, ReturnStmt):
            if stmt.expr is not None:
                self.eval_expr(state, stmt.expr)
        elif isinstance(stmt, Nop):
            pass
        return state

    def _transfer_assign(self, state: PathState, stmt: Assign):
        if stmt.expr is None:
            # declaration without initializer
            sym = self.fresh_sym()
            decl = stmt.decl
            uninit = decl is not None and not decl.is_param and not decl.is_array
            state.init[sym] = Init.UNINIT if uninit else Init.INIT
            state.origin[sym] = "decl"
            state.bindings[stmt.target] = sym
            return
        sym = self.eval_expr(state, stmt.expr)
        state.bindings[stmt.target] = sym
        state.init[sym] = Init.INIT

    def _transfer_call(self, state: PathState, stmt: CallStmt):
        callee = stmt.callee or "<indirect>"
        arg_syms = [self.eval_expr(state, a) for a in stmt.args]
        for c in self.checkers:
            c.pre_call(self, state, callee, arg_syms, stmt.args, stmt.span)
        state.events.append((callee, tuple(arg_syms), stmt.span))

        result = self.new_value(state, origin=callee)
        if callee in HEAP_ALLOCATORS:
            state.resource[result] = Resource.HEAP
            state.nullc[result] = Null.UNKNOWN
        elif callee == "alloca":
            state.resource[result] = Resource.STACK
            state.nullc[result] = Null.NON_NULL
        elif callee in FILE_OPENERS:
            state.resource[result] = Resource.FILE_OPEN
            state.nullc[result] = Null.UNKNOWN
        elif callee == "open":
            state.resource[result] = Resource.FILE_OPEN
            if stmt.target_decl is not None and stmt.target_decl.ptr_depth == 0 and "int" in stmt.target_decl.base.split():
                state.fd_int.add(result)
        elif callee == "free" and arg_syms:
            state.resource[arg_syms[0]] = Resource.FREED
        elif callee == "fclose" and arg_syms:
            state.resource[arg_syms[0]] = Resource.FILE_CLOSED
        elif callee == "fwide":
            state.flags.add("fwide-called")

        if stmt.target is not None:
            state.bindings[stmt.target] = result
        for c in self.checkers:
            c.post_call(self, state, callee, arg_syms, result, stmt.span)

    # -- branch assumptions ----------------------------------------------

    def assume(self, state: PathState, cond: AstNode, taken: bool) -> PathState | None:
        """Refine null constraints; None means the branch is infeasible."""
        expr = cond
        while expr.kind == "Cast":
            expr = expr.children[0]
        if expr.kind == "Binary" and expr.value in ("==", "!="):
            lhs, rhs = expr.children
            for sym_side, zero_side in ((lhs, rhs), (rhs, lhs)):
                sym = self.sym_of(state, sym_side)
                if sym is None or not self.is_zero(state, zero_side):
                    continue
                if not self._pointer_side(state, sym_side, sym):
                    continue
                equals_null = (expr.value == "==") == taken
                return self._constrain(state, sym, Null.IS_NULL if equals_null else Null.NON_NULL)
            return state
        if expr.kind == "Ident":
            sym = self.sym_of(state, expr)
            if sym is not None and self._pointer_side(state, expr, sym):
                return self._constrain(state, sym, Null.NON_NULL if taken else Null.IS_NULL)
            return state
        if expr.kind == "Unary" and expr.value == "!":
            return self.assume(state, expr.children[0], not taken)
        return state

    def _pointer_side(self, state: PathState, expr: AstNode, sym: int) -> bool:
        return self.is_pointerish_sym(state, expr, sym) or state.nullc.get(sym) is not None

    def _constrain(self, state: PathState, sym: int, constraint: Null) -> PathState | None:
        current = state.nullc.get(sym, Null.UNKNOWN)
        if current != Null.UNKNOWN and current != constraint:
            return None
        state.nullc[sym] = constraint
        return state

    # -- path enumeration ---------------------------------------------------

    def run(self) -> tuple[list[Finding], BudgetReport]:
        report = BudgetReport()
        state0 = PathState()
        for var in self.fg.params:
            sym = self.new_value(state0, origin="param")
            state0.bindings[var] = sym

        blocks = {b.id: b for b in self.fg.blocks}
        stack: list[tuple[int, PathState, dict]] = [(self.fg.entry, state0, {})]
        while stack:
            if report.paths_explored >= self.budget.max_paths:
                report.exhausted = True
                break
            block_id, state, backcounts = stack.pop()
            blk = blocks[block_id]
            for stmt in blk.stmts:
                self.apply_transfer(state, stmt)

            term = blk.terminator
            if isinstance(term, ReturnStmt):
                if term.expr is not None:
                    self.eval_expr(state, term.expr)
                self._end_path(state, report)
                continue

            succs = self.fg.successors(block_id)
            if isinstance(term, CondBranch):
                self.eval_expr(state, term.expr)  # reads fire once per visit
                true_edge = next(e for e in succs if e.label == EDGE_TRUE)
                false_edge = next(e for e in succs if e.label == EDGE_FALSE)
                children = []
                for taken, edge in ((True, true_edge), (False, false_edge)):
                    st = self.assume(state.clone(), term.expr, taken)
                    if st is None:
                        continue
                    for c in self.checkers:
                        c.branch_assumed(self, st, term.expr, taken, term.span)
                    child = self._follow(edge, st, backcounts)
                    if child is not None:
                        children.append(child)
                if not children:
                    self._end_path(state, report)
                for child in reversed(children):  # LIFO: true branch first
                    stack.append(child)
            elif succs:
                followed = False
                for edge in succs[:1]:
                    child = self._follow(edge, state, backcounts)
                    if child is not None:
                        stack.append(child)
                        followed = True
                if not followed:
                    self._end_path(state, report)
            else:
                self._end_path(state, report)

        self.findings = dedup_findings(self.findings)
        return self.findings, report

    def _follow(self, edge, state: PathState, backcounts: dict):
        counts = backcounts
        if edge.dst in self.fg.loop_entries:
            # starting one loop iteration; bounded by the unroll budget
            key = ("iter", edge.dst)
            taken = counts.get(key, 0)
            if taken >= self.budget.unroll:
                return None
            counts = dict(counts)
            counts[key] = taken + 1
        if edge.label == EDGE_BACK:
            key = ("back", edge.src, edge.dst)
            taken = counts.get(key, 0)
            if taken >= self.budget.unroll:
                return None
            counts = dict(counts)
            counts[key] = taken + 1
        return (edge.dst, state, counts)

    def _end_path(self, state: PathState, report: BudgetReport):
        for c in self.checkers:
            c.end_of_path(self, state)
        report.paths_explored += 1


def dedup_findings(findings: list[Finding]) -> list[Finding]:
    seen = set()
    out = []
    for f in findings:
        key = (f.checker, f.file, f.line, f.col, f.message)
        if key not in seen:
            seen.add(key)
            out.append(f)
    out.sort(key=lambda f: (f.file, f.line, f.col, f.checker))
    return out


def analyze_function(
    fg: FlowGraph, checkers: list[Checker], budget: Budget | None = None
) -> tuple[list[Finding], BudgetReport]:
    """Explore paths of one function under budget, collecting findings."""
    return Engine(fg, checkers, budget or Budget()).run()
