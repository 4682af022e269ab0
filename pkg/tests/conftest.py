from __future__ import annotations

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

import pytest

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


class _Reporter:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.details: list[str] = []
        self.ok = True

    def check(self, ok: bool, detail: str) -> None:
        self.ok &= bool(ok)
        self.details.append(("ok   " if ok else "FAIL ") + detail)


@pytest.fixture
def criterion(request):
    """Collects the sub-checks of one acceptance criterion; the test asserts
    on ``ok`` and the summary prints one line per criterion."""
    made: list[_Reporter] = []

    def factory(number: int, title: str) -> _Reporter:
        rep = _Reporter(number, title)
        made.append(rep)
        return rep

    yield factory
    for rep in made:
        _ACCEPTANCE[rep.number] = (rep.ok, rep.title)
        for line in rep.details:
            print(f"  [{rep.number}] {line}")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, title = _ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {title}")
