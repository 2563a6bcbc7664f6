RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        name, ok, detail = RESULTS[num]
        terminalreporter.write_line("criterion %2d %s  %s  [%s]" % (
            num, "PASS" if ok else "FAIL", name, detail))
