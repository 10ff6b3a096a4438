import os
from concurrent.futures import ThreadPoolExecutor


def thread_count():
    raw = os.environ.get('POLYISO_THREADS', '')
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def pmap(fn, items):
    """Ordered map; results never depend on the thread count."""
    items = list(items)
    n = min(thread_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
