"""The eleven acceptance criteria, one test each, at their stated tolerances.

Run as a script for just the table:  python tests/test_acceptance.py
"""
import pytest

from ellaybe import acceptance


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number, acceptance_log):
    result = acceptance.CRITERIA[number]()
    line = result.line()
    print(line)
    acceptance_log.append(line)
    assert result.passed, line


if __name__ == "__main__":
    import sys

    ok = True
    for result in acceptance.run_all():
        print(result.line(), flush=True)
        ok = ok and result.passed
    sys.exit(0 if ok else 1)
