_labels: dict[int, str] = {}
_by_node: dict[str, int] = {}
_outcomes: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, label): acceptance criterion this test decides")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            num, label = m.args
            _labels[num] = label
            _by_node[item.nodeid] = num
            _outcomes.setdefault(num, [])


def pytest_runtest_logreport(report):
    num = _by_node.get(report.nodeid)
    if num is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes[num].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_outcomes):
        res = _outcomes[num]
        if any(r == "failed" for r in res):
            status = "FAIL"
        elif res and all(r == "passed" for r in res):
            status = "PASS"
        else:
            status = "SKIP" if res else "NOT RUN"
        terminalreporter.write_line(f"criterion {num}: {status:7s} {_labels[num]}")
