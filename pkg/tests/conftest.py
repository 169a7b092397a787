ACCEPTANCE_LINES = []


def record_criterion(num: int, name: str, passed: bool, detail: str = ""):
    line = f"criterion {num:2d} [{name}]: {'PASS' if passed else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line, flush=True)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
