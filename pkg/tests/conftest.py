import acceptance_report


def pytest_terminal_summary(terminalreporter):
    lines = acceptance_report.LINES
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
