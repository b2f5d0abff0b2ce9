# tests/integration/test_instance_file.py

import pytest

from siplb.core.exceptions import InstanceFormatError
from siplb.io.instance_file import load_instance, read_instance, to_file_text
from siplb.models import parse
from siplb.schemas.instance import builtin_counterexample

CEX_FILE = """\
# inf -x  s.t.  2x - y <= 0 for all y in [-1, 1]
name cex
xvars 1
yvars 1
xdom 1 -1 1
ydom 1 -1 1
objective -x1
constraint 2*x1 - y1
"""


def test_counterexample_file_matches_builtin():
    assert load_instance(CEX_FILE) == builtin_counterexample()


def test_keys_in_any_order_with_comments_and_blank_lines():
    text = """
    constraint x1 * y2 - y1   # bilinear
    objective x1^2

    ydom 2 0 1
    ydom 1 -2 2.5
    xdom 1 -1e-1 3
    yvars 2
    xvars 1
    """
    inst = load_instance(text)
    assert inst.name == "unnamed"
    assert inst.x_box.bounds == ((-0.1, 3.0),)
    assert inst.y_box.bounds == ((-2.0, 2.5), (0.0, 1.0))
    assert inst.constraint == parse("x1 * y2 - y1")


def test_canonical_text_reads_back():
    inst = builtin_counterexample()
    text = to_file_text(inst, comment="written by a test\nsecond line")
    assert text.startswith("# written by a test\n# second line\nname cex\n")
    assert "objective (-x1)\n" in text
    assert "constraint ((2 * x1) - y1)\n" in text
    assert load_instance(text) == inst


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        (CEX_FILE + "xvars 1\n", 9, "duplicate key 'xvars'"),
        (CEX_FILE + "ydom 1 0 1\n", 9, "duplicate 'ydom 1'"),
        (CEX_FILE + "bogus 1\n", 9, "unknown key 'bogus'"),
        (CEX_FILE.replace("constraint 2*x1 - y1\n", ""), None, "missing key 'constraint'"),
        (CEX_FILE.replace("ydom 1 -1 1\n", ""), None, "missing key 'ydom 1'"),
        (CEX_FILE.replace("xdom 1 -1 1", "xdom 1 1 -1"), 5, "empty interval"),
        (CEX_FILE.replace("xdom 1 -1 1", "xdom 2 -1 1"), 5, "outside 1..1"),
        (CEX_FILE.replace("xdom 1 -1 1", "xdom 1 -1"), 5, "expects"),
        (CEX_FILE.replace("xdom 1 -1 1", "xdom 1 a 1"), 5, "expects"),
        (CEX_FILE.replace("xvars 1", "xvars 0"), 3, "positive integer"),
        (CEX_FILE.replace("xvars 1", "xvars one"), 3, "positive integer"),
        (CEX_FILE.replace("-x1", "-x2"), 7, "undeclared variable x2"),
        (CEX_FILE.replace("- y1", "- y3"), 8, "undeclared variable y3"),
        (CEX_FILE.replace("objective -x1", "objective -x1 + y1"), 7, "objective must not use y1"),
        (CEX_FILE.replace("2*x1 - y1", "2*x1 -"), 8, "constraint:"),
        (CEX_FILE.replace("2*x1 - y1", "tan(x1)"), 8, "Unknown function 'tan'"),
        (CEX_FILE.replace("name cex", "name"), 2, "needs a value"),
    ],
    ids=[
        "duplicate_single_key",
        "duplicate_domain",
        "unknown_key",
        "missing_constraint",
        "missing_domain",
        "empty_interval",
        "index_out_of_range",
        "too_few_bounds",
        "non_numeric_bound",
        "zero_dimension",
        "non_numeric_dimension",
        "undeclared_x",
        "undeclared_y",
        "y_in_objective",
        "syntax_error",
        "unknown_function",
        "empty_name",
    ]
)
def test_format_errors(text, line, fragment):
    """
    Test that every malformed file raises InstanceFormatError naming the
    offending line where there is one.
    """
    with pytest.raises(InstanceFormatError) as exc_info:
        load_instance(text)
    assert exc_info.value.line == line
    assert fragment in str(exc_info.value)
    if line is not None:
        assert str(exc_info.value).startswith(f"line {line}: ")


def test_infinite_bound_rejected():
    with pytest.raises(InstanceFormatError) as exc_info:
        load_instance(CEX_FILE.replace("ydom 1 -1 1", "ydom 1 -1 inf"))
    assert "bounded" in str(exc_info.value)


def test_read_instance(tmp_path):
    path = tmp_path / "cex.sip"
    path.write_text(CEX_FILE, encoding="utf-8")
    assert read_instance(path) == builtin_counterexample()


def test_read_instance_error_names_file(tmp_path):
    path = tmp_path / "broken.sip"
    path.write_text(CEX_FILE + "bogus\n", encoding="utf-8")
    with pytest.raises(InstanceFormatError) as exc_info:
        read_instance(path)
    assert exc_info.value.line == 9
    assert "broken.sip" in str(exc_info.value)


def test_read_instance_missing_file(tmp_path):
    with pytest.raises(OSError):
        read_instance(tmp_path / "absent.sip")
