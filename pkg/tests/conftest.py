import acceptance_log


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance_log.RESULTS):
        status, title, detail = acceptance_log.RESULTS[n]
        line = f"criterion {n:2d}: {status}  {title}"
        terminalreporter.write_line(f"{line}  ({detail})" if detail else line)
