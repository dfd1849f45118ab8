"""The acceptance criteria, one test each.

Each test prints a single pass/fail line (run with ``-s`` to see them, or
``python tests/test_acceptance.py``).
"""

import pytest

from fracplap.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [n for n, *_ in CRITERIA],
                         ids=[f"{n:02d}-{name.replace(' ', '-')}" for n, name, *_ in CRITERIA])
def test_criterion(number, capsys):
    c = run_criterion(number)
    with capsys.disabled():
        print("\n" + c.summary_line())
    failing = [ch for ch in c.checks if not ch.passed]
    assert c.error is None, c.error
    assert not failing, "\n".join(
        f"{ch.name}: expected {ch.expected}, got {ch.got}, tol {ch.tol}" for ch in failing)
    assert c.within_budget, f"took {c.seconds:.1f} s, budget {c.budget_s} s"


if __name__ == "__main__":
    for n, *_ in CRITERIA:
        print(run_criterion(n).summary_line(), flush=True)
