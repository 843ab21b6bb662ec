import string

from hypothesis import given, settings
from hypothesis import strategies as st

from wasmsmell.cparser import parse_source


def functions(unit):
    return [n for n in unit.children if n.kind == "FunctionDef"]


def find_kind(unit, kind):
    return [n for n in unit.walk() if n.kind == kind]


def test_simple_function():
    res = parse_source("int main(void) { return 0; }")
    assert res.unit.kind == "TranslationUnit"
    fns = functions(res.unit)
    assert len(fns) == 1
    assert fns[0].name == "main"


def test_decl_info_pointer():
    res = parse_source('int f(void) { FILE *f = fopen("file.txt", "w+"); return 0; }')
    decls = find_kind(res.unit, "Decl")
    d = decls[0].decl
    assert d.name == "f"
    assert d.base == "FILE"
    assert d.ptr_depth == 1
    assert d.has_init


def test_decl_info_int_from_call():
    res = parse_source("int g(void) { int f = open(0); return f; }")
    d = find_kind(res.unit, "Decl")[0].decl
    assert (d.base, d.ptr_depth, d.has_init) == ("int", 0, True)


def test_decl_info_array():
    res = parse_source('int h(void) { char string2[] = "a/b"; return 0; }')
    d = find_kind(res.unit, "Decl")[0].decl
    assert d.base == "char"
    assert d.is_array


def test_null_literal_special_cased():
    res = parse_source("int f(char *p) { if (p == NULL) return 1; return 0; }")
    lits = [n for n in res.unit.walk() if n.kind == "Literal" and n.literal_kind == "null"]
    assert len(lits) == 1


def test_switch_lowered_to_if_chain():
    res = parse_source(
        "int f(int x) { switch (x) { case 1: return 1; case 2: return 2; default: return 0; } }"
    )
    assert find_kind(res.unit, "If")
    assert not find_kind(res.unit, "Switch")


def test_goto_becomes_skipped_with_diagnostic():
    res = parse_source("int f(void) { goto out; out: return 0; }")
    assert res.unit.kind == "TranslationUnit"
    assert any("goto" in d.message for d in res.diagnostics)


def test_garbage_between_functions_recovers():
    src = "int a(void) { return 1; }\n@@@ ??? $$$\nint b(void) { return 2; }\n"
    res = parse_source(src)
    names = [f.name for f in functions(res.unit)]
    assert names == ["a", "b"]
    assert find_kind(res.unit, "SkippedRegion")
    assert res.diagnostics


def test_unbalanced_braces_do_not_crash():
    res = parse_source("int f(void) { if (x) { return 1; ")
    assert res.unit.kind == "TranslationUnit"


def test_includes_surface_through_parse():
    res = parse_source('#include <emscripten.h>\nint main(void) { return 0; }')
    assert [i.target for i in res.includes] == ["emscripten.h"]


def test_spans_cover_source():
    src = "int f(void) { int x = 1; return x; }"
    res = parse_source(src)
    for node in res.unit.walk():
        if node.span is None:
            continue
        assert 0 <= node.span.offset <= len(src)
        assert node.span.offset + node.span.length <= len(src)


def test_deeply_nested_parens_hit_depth_limit_not_recursion():
    res = parse_source("int f(void) { x = " + "(" * 500 + "1" + ")" * 500 + "; }")
    assert res.unit.kind == "TranslationUnit"


def test_deeply_nested_blocks_hit_depth_limit_not_recursion():
    res = parse_source("int f(void) { " + "{" * 600 + "}" * 600 + " }")
    assert res.unit.kind == "TranslationUnit"


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=1024))
def test_parse_is_total_on_bytes(data):
    res = parse_source(data)
    assert res.unit.kind == "TranslationUnit"


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet=string.printable, max_size=400))
def test_parse_is_total_on_text(text):
    res = parse_source(text)
    assert res.unit.kind == "TranslationUnit"
