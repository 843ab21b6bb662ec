"""Per-function control-flow graphs and declared-type tables.

Lowers the structured AST into basic blocks of simplified statements.
Calls nested inside expressions are hoisted into explicit CallStmt
temporaries so that flow checkers observe every call event, and
short-circuit conditions become nested branches.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cparser import AstNode, DeclInfo
from .lexer import Span

EDGE_FALLTHROUGH = "fallthrough"
EDGE_TRUE = "branch-true"
EDGE_FALSE = "branch-false"
EDGE_BACK = "back-edge"


@dataclass
class DeclType:
    base: str
    ptr_depth: int = 0
    is_array: bool = False
    is_param: bool = False
    has_init: bool = False
    span: Span | None = None
    original: str = ""

    @property
    def pointerish(self) -> bool:
        return self.ptr_depth > 0 or self.is_array


@dataclass
class SymbolTable:
    """Scoped declaration table; lookups resolve innermost-first."""

    # entries: (scope_start, scope_end, name, DeclType); later = inner
    entries: list[tuple[int, int, str, DeclType]] = field(default_factory=list)

    def lookup(self, name: str, offset: int) -> DeclType | None:
        best = None
        for start, end, nm, dt in self.entries:
            if nm == name and start <= offset <= end:
                best = dt  # later entries are from inner scopes
        return best


def _decl_type(info: DeclInfo, span: Span) -> DeclType:
    return DeclType(
        base=info.base,
        ptr_depth=info.ptr_depth,
        is_array=info.is_array,
        is_param=info.is_param,
        has_init=info.has_init,
        span=span,
        original=info.name,
    )


def resolve_decl_types(func: AstNode) -> SymbolTable:
    """Collect every declaration in a FunctionDef with its enclosing scope."""
    table = SymbolTable()
    fn_start, fn_end = func.span.offset, func.span.end

    for param in func.children[:-1]:
        if param.kind == "Decl" and param.decl is not None:
            table.entries.append(
                (fn_start, fn_end, param.decl.name, _decl_type(param.decl, param.span))
            )

    def visit(node: AstNode, scope: tuple[int, int]):
        if node.kind == "Block":
            inner = (node.span.offset, node.span.end)
            for child in node.children:
                visit(child, inner)
            return
        if node.kind == "Decl" and node.decl is not None:
            table.entries.append(
                (scope[0], scope[1], node.decl.name, _decl_type(node.decl, node.span))
            )
        for child in node.children:
            visit(child, scope)

    body = func.children[-1]
    visit(body, (fn_start, fn_end))
    return table


# -- lowered statements -------------------------------------------------


@dataclass
class Assign:
    target: str
    expr: AstNode | None  # None = declaration without initializer
    span: Span
    decl: DeclType | None = None


@dataclass
class CallStmt:
    callee: str | None
    args: list[AstNode]
    target: str | None
    span: Span
    target_decl: DeclType | None = None


@dataclass
class CondBranch:
    expr: AstNode
    span: Span


@dataclass
class ReturnStmt:
    expr: AstNode | None
    span: Span


@dataclass
class Nop:
    span: Span


@dataclass
class BasicBlock:
    id: int
    stmts: list = field(default_factory=list)
    terminator: object | None = None  # CondBranch | ReturnStmt | None


@dataclass
class Edge:
    src: int
    dst: int
    label: str


@dataclass
class FlowGraph:
    name: str
    blocks: list[BasicBlock]
    entry: int
    edges: list[Edge]
    symbols: dict[str, DeclType]  # unique var name -> declared type
    params: list[str]
    loop_entries: dict[int, int] = field(default_factory=dict)  # body block -> header

    def successors(self, block_id: int) -> list[Edge]:
        return [e for e in self.edges if e.src == block_id]


class _Lowerer:
    def __init__(self, func: AstNode):
        self.func = func
        self.blocks: list[BasicBlock] = []
        self.edges: list[Edge] = []
        self.symbols: dict[str, DeclType] = {}
        self.scopes: list[dict[str, str]] = [{}]
        self.loop_headers: list[int] = []
        self.loop_body_entries: dict[int, int] = {}
        self.temp_counter = 0
        self.name_counts: dict[str, int] = {}
        self.current = self.new_block()

    # -- infrastructure ------------------------------------------------

    def new_block(self) -> BasicBlock:
        blk = BasicBlock(len(self.blocks))
        self.blocks.append(blk)
        return blk

    def edge(self, src: BasicBlock, dst: BasicBlock, label: str = EDGE_FALLTHROUGH):
        if dst.id in self.loop_headers and label == EDGE_FALLTHROUGH:
            label = EDGE_BACK
        self.edges.append(Edge(src.id, dst.id, label))

    def emit(self, stmt):
        self.current.stmts.append(stmt)

    def fresh_temp(self) -> str:
        self.temp_counter += 1
        return f"%t{self.temp_counter}"

    def declare(self, info: DeclInfo, span: Span) -> str:
        count = self.name_counts.get(info.name, 0) + 1
        self.name_counts[info.name] = count
        unique = info.name if count == 1 else f"{info.name}@{count}"
        self.scopes[-1][info.name] = unique
        self.symbols[unique] = _decl_type(info, span)
        return unique

    def resolve(self, name: str) -> str:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return name

    # -- expression lowering ---------------------------------------------

    def lower_expr(self, node: AstNode) -> AstNode:
        """Rebuild the expression with calls hoisted and idents resolved."""
        kind = node.kind
        if kind == "Ident":
            resolved = self.resolve(node.name)
            if resolved != node.name:
                return AstNode("Ident", node.span, name=resolved)
            return node
        if kind == "Literal":
            return node
        if kind == "Call":
            args = [self.lower_expr(a) for a in node.children[1:]]
            tmp = self.fresh_temp()
            self.emit(CallStmt(node.name, args, tmp, node.span))
            return AstNode("Ident", node.span, name=tmp)
        if kind == "Unary" and node.value in ("++", "--"):
            operand = self.lower_expr(node.children[0])
            if operand.kind == "Ident":
                self.emit(
                    Assign(
                        operand.name,
                        AstNode("Unary", node.span, [operand], value=node.value),
                        node.span,
                    )
                )
                return operand
            return AstNode("Unary", node.span, [operand], value=node.value)
        if kind == "Binary" and node.value in (
            "=",
            "+=",
            "-=",
            "*=",
            "/=",
            "%=",
            "&=",
            "|=",
            "^=",
            "<<=",
            ">>=",
        ):
            lhs, rhs = node.children
            rhs_l = self.lower_assign_rhs(lhs, node.value, rhs, node.span)
            return rhs_l
        children = [self.lower_expr(c) for c in node.children]
        if children == node.children:
            return node
        return AstNode(kind, node.span, children, name=node.name, value=node.value, literal_kind=node.literal_kind)

    def lower_assign_rhs(self, lhs: AstNode, op: str, rhs: AstNode, span: Span) -> AstNode:
        if lhs.kind == "Ident":
            target = self.resolve(lhs.name)
            if op == "=":
                return self.assign_to(target, rhs, span)
            lowered_lhs = AstNode("Ident", lhs.span, name=target)
            expr = AstNode(
                "Binary", span, [lowered_lhs, self.lower_expr(rhs)], value=op[:-1]
            )
            self.emit(Assign(target, expr, span))
            return lowered_lhs
        # unsupported lvalue (deref, member, index): evaluate both sides
        self.lower_expr(lhs)
        return self.lower_expr(rhs)

    def assign_to(self, target: str, rhs: AstNode, span: Span, decl: DeclType | None = None) -> AstNode:
        """Emit target = rhs; calls become CallStmt with a result target."""
        core = rhs
        while core.kind == "Cast":
            core = core.children[0]
        if core.kind == "Call":
            args = [self.lower_expr(a) for a in core.children[1:]]
            self.emit(
                CallStmt(core.name, args, target, span, target_decl=decl or self.symbols.get(target))
            )
        else:
            expr = self.lower_expr(rhs)
            self.emit(Assign(target, expr, span, decl=decl))
        return AstNode("Ident", span, name=target)

    # -- statement lowering ------------------------------------------------

    def lower_stmt(self, node: AstNode):
        kind = node.kind
        if kind == "Block":
            self.scopes.append({})
            for child in node.children:
                self.lower_stmt(child)
            self.scopes.pop()
        elif kind == "Decl":
            if node.decl is None:
                return
            unique = self.declare(node.decl, node.span)
            dt = self.symbols[unique]
            if node.children:
                self.assign_to(unique, node.children[0], node.span, decl=dt)
            else:
                self.emit(Assign(unique, None, node.span, decl=dt))
        elif kind == "ExprStmt":
            if not node.children:
                return
            expr = self.lower_expr(node.children[0])
            # keep residual reads visible (hoisted temps carry none)
            if expr.kind not in ("Ident", "Literal"):
                self.emit(Assign(self.fresh_temp(), expr, node.span))
        elif kind == "If":
            cond = node.children[0]
            then_blk = self.new_block()
            else_blk = self.new_block()
            join = self.new_block() if len(node.children) > 2 else else_blk
            self.lower_condition(cond, then_blk, else_blk)
            self.current = then_blk
            self.lower_stmt(node.children[1])
            self.edge(self.current, join)
            if len(node.children) > 2:
                self.current = else_blk
                self.lower_stmt(node.children[2])
                self.edge(self.current, join)
            self.current = join
        elif kind == "While":
            header = self.new_block()
            self.edge(self.current, header)
            body_blk = self.new_block()
            exit_blk = self.new_block()
            self.current = header
            self.loop_headers.append(header.id)
            self.loop_body_entries[body_blk.id] = header.id
            self.lower_condition(node.children[0], body_blk, exit_blk)
            self.current = body_blk
            self.lower_stmt(node.children[1])
            self.edge(self.current, header, EDGE_BACK)
            self.loop_headers.pop()
            self.current = exit_blk
        elif kind == "For":
            init, cond, step, body = node.children
            self.lower_stmt(init)
            header = self.new_block()
            self.edge(self.current, header)
            body_blk = self.new_block()
            exit_blk = self.new_block()
            self.current = header
            self.loop_headers.append(header.id)
            self.loop_body_entries[body_blk.id] = header.id
            self.lower_condition(cond, body_blk, exit_blk)
            self.current = body_blk
            self.lower_stmt(body)
            self.lower_stmt(step)
            self.edge(self.current, header, EDGE_BACK)
            self.loop_headers.pop()
            self.current = exit_blk
        elif kind == "Return":
            expr = self.lower_expr(node.children[0]) if node.children else None
            self.current.terminator = ReturnStmt(expr, node.span)
            self.current = self.new_block()  # unreachable unless jumped to
        elif kind == "SkippedRegion":
            self.emit(Nop(node.span))
        else:  # stray expression nodes used as statements
            self.lower_expr(node)

    def lower_condition(self, cond: AstNode, then_blk: BasicBlock, else_blk: BasicBlock):
        if cond.kind == "Binary" and cond.value == "&&":
            mid = self.new_block()
            self.lower_condition(cond.children[0], mid, else_blk)
            self.current = mid
            self.lower_condition(cond.children[1], then_blk, else_blk)
            return
        if cond.kind == "Binary" and cond.value == "||":
            mid = self.new_block()
            self.lower_condition(cond.children[0], then_blk, mid)
            self.current = mid
            self.lower_condition(cond.children[1], then_blk, else_blk)
            return
        if cond.kind == "Unary" and cond.value == "!":
            self.lower_condition(cond.children[0], else_blk, then_blk)
            return
        expr = self.lower_expr(cond)
        self.current.terminator = CondBranch(expr, cond.span)
        self.edge(self.current, then_blk, EDGE_TRUE)
        self.edge(self.current, else_blk, EDGE_FALSE)

    # -- driver ---------------------------------------------------------

    def build(self) -> FlowGraph:
        params = []
        for p in self.func.children[:-1]:
            if p.kind == "Decl" and p.decl is not None:
                params.append(self.declare(p.decl, p.span))
        body = self.func.children[-1]
        self.lower_stmt(body)
        return self.finish(params)

    def finish(self, params: list[str]) -> FlowGraph:
        # prune blocks unreachable from entry, renumber deterministically
        succ: dict[int, list[Edge]] = {}
        for e in self.edges:
            succ.setdefault(e.src, []).append(e)
        reachable = set()
        stack = [0]
        while stack:
            b = stack.pop()
            if b in reachable:
                continue
            reachable.add(b)
            for e in succ.get(b, []):
                stack.append(e.dst)
        keep = [b for b in self.blocks if b.id in reachable]
        remap = {b.id: i for i, b in enumerate(keep)}
        for b in keep:
            b.id = remap[b.id]
        edges = [
            Edge(remap[e.src], remap[e.dst], e.label)
            for e in self.edges
            if e.src in remap and e.dst in remap
        ]
        loop_entries = {
            remap[b]: remap[h]
            for b, h in self.loop_body_entries.items()
            if b in remap and h in remap
        }
        return FlowGraph(
            self.func.name or "<anonymous>",
            keep,
            0,
            edges,
            self.symbols,
            params,
            loop_entries,
        )


def build_cfg(func: AstNode) -> FlowGraph:
    """Lower one FunctionDef into a FlowGraph."""
    assert func.kind == "FunctionDef"
    return _Lowerer(func).build()
