def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for report in terminalreporter.stats.get(outcome, []):
            if report.when != "call":
                continue
            for key, value in report.user_properties:
                if key == "criterion":
                    lines.append((value, outcome))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for value, outcome in sorted(lines, key=lambda item: int(item[0].split()[0])):
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {value}")
