import pytest

from costcx.measures import koch_raster, write_pbm

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def tea_time(tmp_path):
    path = tmp_path / "text.txt"
    path.write_text(" ".join(["tea"] * 50 + ["time"] * 50) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def koch_pbm(tmp_path):
    path = tmp_path / "koch.pbm"
    path.write_text(write_pbm(koch_raster(4)), encoding="ascii")
    return path


@pytest.fixture
def acceptance_log():
    def record(name: str, ok: bool, detail: str = ""):
        _ACCEPTANCE.append((name, ok, detail))
        print(f"[{'PASS' if ok else 'FAIL'}] {name} {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name} {detail}")
