import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "phasekit",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "phasekit"))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import ACCEPTANCE_LINES, INFO_LINES

    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
    for line in INFO_LINES:
        terminalreporter.write_line(line)
