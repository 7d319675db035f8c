import pytest

# fixed seeds for every statistical test, so a failing run can be replayed
MC_SEED = 2016
PREFIX_SEEDS = {1: 11, 7: 17}
CHI2_SEED = 424242
CALIBRATION_SEEDS = range(1000, 1100)


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the summary hook prints them all at the end."""
    lines = request.config.stash.setdefault(_KEY, [])

    def record(number: int, checks: list[tuple[str, bool]]) -> None:
        ok = all(passed for _, passed in checks)
        failed = [name for name, passed in checks if not passed]
        detail = "; ".join(name for name, _ in checks) if ok else "failed: " + "; ".join(failed)
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append((number, line))
        print(line)
        assert ok, line

    return record


_KEY = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
