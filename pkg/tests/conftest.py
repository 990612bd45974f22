import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call" or "test_acceptance" not in rep.nodeid:
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                status = "PASS" if outcome == "passed" else "FAIL"
                rows.append((props["criterion"], status, props.get("title", ""), rep.duration))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for cid, status, title, secs in sorted(rows, key=lambda r: int(r[0][2:])):
        terminalreporter.write_line(f"{cid:<5} {status}  {title} ({secs:.2f}s)")
