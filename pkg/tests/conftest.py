import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LOG:
        return
    slow_ran = any("N=13" in lab for lab, _, _ in mod.LOG.get(1, []))
    terminalreporter.section("acceptance")
    for line in mod.summary_lines(slow_ran):
        terminalreporter.write_line(line)
