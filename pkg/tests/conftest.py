from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    lines = {}
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py::test_criterion_" not in rep.nodeid or rep.when != "call":
                continue
            name = rep.nodeid.split("::test_criterion_")[1]
            num = int(name[:2])
            ok = lines.get(num, (True, name))[0] and outcome == "passed"
            lines[num] = (ok, name.split("[")[0][3:].replace("_", " "))
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for num in sorted(lines):
            ok, title = lines[num]
            terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {title}")
