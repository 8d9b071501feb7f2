acceptance_results: list[tuple[str, bool]] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in acceptance_results:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}")
