"""Shared registry of acceptance-criterion outcomes, printed in the pytest terminal summary."""
from contextlib import contextmanager

RESULTS: dict[int, tuple[str, str, str]] = {}


@contextmanager
def criterion(number: int, title: str):
    note = {"detail": ""}
    try:
        yield note
    except BaseException as exc:
        RESULTS[number] = ("FAIL", title, f"{type(exc).__name__}: {exc}".splitlines()[0])
        print(f"criterion {number:2d} FAIL  {title}")
        raise
    if RESULTS.get(number, ("PASS",))[0] != "FAIL":
        RESULTS[number] = ("PASS", title, note["detail"])
    print(f"criterion {number:2d} PASS  {title}  {note['detail']}")
