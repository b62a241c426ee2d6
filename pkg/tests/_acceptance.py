"""Pass/fail bookkeeping for the acceptance criteria."""

import contextlib
import time

RESULTS: dict[int, str] = {}


@contextlib.contextmanager
def criterion(number: int, label: str):
    t0 = time.perf_counter()
    notes: list[str] = []
    try:
        yield notes
    except BaseException as e:
        line = f"FAIL  criterion {number:2d}: {label} ({type(e).__name__}: {str(e).splitlines()[0] if str(e) else ''})"
        RESULTS[number] = line
        print(line)
        raise
    extra = f"; {'; '.join(notes)}" if notes else ""
    line = f"PASS  criterion {number:2d}: {label} [{time.perf_counter() - t0:.2f}s{extra}]"
    RESULTS[number] = line
    print(line)
