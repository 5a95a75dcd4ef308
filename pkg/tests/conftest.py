import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=30,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


_criteria: dict[str, tuple[str, float]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_c" not in report.nodeid:
        return
    # parametrized cases of one criterion share a line
    name = report.nodeid.split("::", 1)[1].split("[", 1)[0]
    status, elapsed = _criteria.get(name, ("PASS", 0.0))
    if report.failed:
        status = "FAIL"
    elif report.skipped:
        status = "SKIP" if status == "PASS" else status
    _criteria[name] = (status, elapsed + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, (status, elapsed) in sorted(_criteria.items()):
        num, _, label = name[len("test_c"):].partition("_")
        terminalreporter.write_line(
            f"criterion {int(num):2d}  {status}  {label.replace('_', ' ')}  ({elapsed:.1f}s)")
