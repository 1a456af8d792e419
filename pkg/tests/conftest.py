from __future__ import annotations

import pytest

CRITERIA = {
    1: "exact counts, tiny datasets, 12 configurations",
    2: "exact counts, small datasets, default configuration",
    3: "exact counts, medium datasets",
    4: "oracle equivalence on 1000 random graphs",
    5: "exactly-once and closedness in debug mode",
    6: "schedule independence, 20 graphs x 12 configurations x 5 runs",
    7: "compact-array operation sequences",
    8: "reverse-scan counts match forward intersection",
    9: "workload balance: k=2 max/mean below k=1",
    10: "per-worker space O(n_u + n_v)",
    11: "8 workers faster than 1 on Marvel",
}

_results: dict[int, list[tuple[str, str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): numbered acceptance criterion")


@pytest.fixture
def note(request):
    """Attach a measured detail to the acceptance summary line."""
    def add(text: str) -> None:
        request.node.user_properties.append(("note", text))
    return add


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        if rep.passed:
            status = "PASS"
        elif rep.skipped:
            status = "BLOCKED"
        else:
            status = "FAIL"
        detail = "; ".join(v for k, v in item.user_properties if k == "note")
        if rep.skipped and isinstance(rep.longrepr, tuple):
            detail = rep.longrepr[2].removeprefix("Skipped: ")
        _results.setdefault(marker.args[0], []).append((status, item.name, detail))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        runs = _results.get(n)
        if not runs:
            continue
        statuses = {s for s, _, _ in runs}
        overall = "FAIL" if "FAIL" in statuses else "BLOCKED" if "BLOCKED" in statuses else "PASS"
        terminalreporter.write_line(f"criterion {n:>2} {overall:<7} {title}")
        for status, name, detail in runs:
            extra = f": {detail}" if detail else ""
            terminalreporter.write_line(f"    {status:<7} {name}{extra}")
