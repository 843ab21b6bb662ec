import time
from pathlib import Path

import pytest

SESSION_START = time.monotonic()

FIXTURES = Path(__file__).parent / "fixtures"
SMELLS = FIXTURES / "smells"
NEGATIVE = FIXTURES / "negative"

# Expected checker hits per golden fixture: {fixture name: {(checker, line), ...}}.
# The double-fclose snippet is the one snippet flagged by two checkers: both
# fclose calls happen on a handle that was never null-checked, so
# error-without-action fires alongside double-fclose.
GOLDEN_MATRIX = {
    "a_double_free.c": {("double-free", 7)},
    "b_error_without_action.c": {("error-without-action", 5)},
    "c_double_fclose.c": {
        ("double-fclose", 7),
        ("error-without-action", 6),
        ("error-without-action", 7),
    },
    "d_uninitialized_variable.c": {("uninitialized-variable", 5)},
    "e_access_env.c": {("access-env", 5)},
    "f_bad_fputs_comparison.c": {("bad-fputs-comparison", 4)},
    "g_improper_resource_shutdown.c": {("improper-resource-shutdown", 9)},
    "h_wide_string.c": {("wide-string", 4)},
    "i_format_arg_type.c": {("format-arg-type", 4)},
    "k_format_arg_count.c": {("format-arg-count", 4)},
    "m_pointer_subtraction.c": {("pointer-subtraction", 8)},
}

OPTIONAL_MATRIX = {
    "j_alloca_free.c": {("alloca-free", 7)},
    "l_offset_free.c": {("offset-free", 7)},
}


def analyze_fixture(path: Path, checker_ids=None):
    from wasmsmell import analyze_source

    return analyze_source(path.read_bytes(), path.name, checker_ids=checker_ids)


def finding_cells(result):
    return {(f.checker, f.line) for f in result.findings}


@pytest.fixture
def smells_dir():
    return SMELLS


@pytest.fixture
def negative_dir():
    return NEGATIVE
