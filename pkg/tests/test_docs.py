from pathlib import Path

from preludec import diagnostics
from preludec.lexer import KEYWORDS

DOCS = Path(__file__).parent.parent / "docs"


def test_every_code_documented():
    text = (DOCS / "diagnostics.md").read_text()
    codes = [v for k, v in vars(diagnostics).items() if k.startswith(("E_", "W_"))]
    codes += ["E_NONPOSITIVE_PERIOD", "E_NONINTEGER_START", "E_NONPOSITIVE_FACTOR", "E_NONINTEGER_SHIFT", "E_NEGATIVE_SHIFT"]
    assert [c for c in codes if f"`{c}`" not in text] == []


def test_grammar_lists_keywords():
    text = (DOCS / "grammar.md").read_text()
    assert [k for k in sorted(KEYWORDS) if k not in text] == []
