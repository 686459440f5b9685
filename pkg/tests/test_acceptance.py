"""Acceptance criteria, one test per criterion.

Run ``pytest tests/test_acceptance.py -s`` to see the pass/fail table.
"""

import pytest

from dipolewave import acceptance, cli


@pytest.mark.parametrize("criterion", acceptance.CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.line()


def test_reproduce_is_deterministic(tmp_path, capsys):
    result = acceptance.determinism()
    print(result.line())
    assert result.passed

    codes = [cli.main(["reproduce", "--output-dir", str(tmp_path / run)]) for run in ("a", "b")]
    out = capsys.readouterr().out
    assert codes == [0, 0], out
    assert out.count("10/10 criteria passed") == 2
    for name in ("acceptance.csv", "acceptance.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    print(result.line())
