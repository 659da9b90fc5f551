from collections import defaultdict

import pytest

# criterion number -> list of (label, passed, detail)
ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = defaultdict(list)

TITLES = {
    1: "differential validity",
    2: "chain-map identity",
    3: "homology equality",
    4: "per-core-graph diagram",
    5: "oracle equivalence",
    6: "determinism",
}


@pytest.fixture
def record():
    def add(criterion: int, label: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE[criterion].append((label, ok, detail))
        print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'} {label} {detail}".rstrip())
    return add


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for c in sorted(TITLES):
        parts = ACCEPTANCE.get(c)
        if not parts:
            tr.write_line(f"criterion {c} ({TITLES[c]}): NOT RUN")
            continue
        ok = all(p[1] for p in parts)
        bad = [p[0] for p in parts if not p[1]]
        tail = f"  failing: {', '.join(bad)}" if bad else ""
        tr.write_line(f"criterion {c} ({TITLES[c]}): {'PASS' if ok else 'FAIL'} "
                      f"[{sum(p[1] for p in parts)}/{len(parts)} parts]{tail}")
    for c in sorted(ACCEPTANCE):
        for label, ok, detail in ACCEPTANCE[c]:
            tr.write_line(f"  {c}. {'PASS' if ok else 'FAIL'} {label} {detail}".rstrip())
