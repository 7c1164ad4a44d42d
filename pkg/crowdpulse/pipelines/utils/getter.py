# MIT License
#
# Copyright (c) 2024- crowdpulse developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

import multiprocessing
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

NUM_WORKERS_ENV = "CROWDPULSE_NUM_WORKERS"

T = TypeVar("T")
R = TypeVar("R")


def get_num_workers(num_workers: Optional[int] = None) -> int:
    """Get number of worker processes

    Parameters
    ----------
    num_workers : int, optional
        Number of workers. 0 runs everything in the calling process.
        Defaults to the CROWDPULSE_NUM_WORKERS environment variable, or
        multiprocessing.cpu_count() // 2 when it is not set.

    Returns
    -------
    num_workers : int
    """

    if num_workers is None:
        env = os.environ.get(NUM_WORKERS_ENV)
        if env is None:
            num_workers = multiprocessing.cpu_count() // 2
        else:
            try:
                num_workers = int(env)
            except ValueError:
                raise ValueError(
                    f"{NUM_WORKERS_ENV} must be an integer (got '{env}')."
                )

    if num_workers < 0:
        raise ValueError(f"Number of workers must be non-negative (got {num_workers}).")

    if num_workers > 0 and sys.platform == "darwin":
        warnings.warn(
            "num_workers > 0 is not supported with macOS: setting num_workers = 0."
        )
        num_workers = 0

    return num_workers


def parallel_map(
    function: Callable[[T], R],
    items: Iterable[T],
    num_workers: Optional[int] = None,
    on_result: Optional[Callable[[int, R], None]] = None,
) -> List[R]:
    """Order-preserving map, in a process pool when num_workers > 0

    `function` must be picklable (defined at module level). `on_result` is
    called in the calling process with the index and result of every item,
    in order.
    """

    items = list(items)
    num_workers = min(get_num_workers(num_workers), len(items))

    if num_workers <= 1:
        iterator = map(function, items)
        executor = None
    else:
        executor = ProcessPoolExecutor(max_workers=num_workers)
        iterator = executor.map(function, items)

    results = []
    try:
        for index, result in enumerate(iterator):
            results.append(result)
            if on_result is not None:
                on_result(index, result)
    finally:
        if executor is not None:
            executor.shutdown()

    return results
