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

import zlib
from typing import Hashable

import numpy as np


def create_rng(seed: int, *context: Hashable) -> np.random.Generator:
    """Create a context-specific random number generator

    This makes sure that
    1. random draws are reproducible for a given `seed`
    2. every context (e.g. gate time, restart index) uses a different stream

    Parameters
    ----------
    seed : int
        Global seed.
    *context : hashable
        Anything identifying the consumer of the generator.
    """

    seed_tuple = (seed,) + tuple(context)
    # use adler32 because python's `hash` is not deterministic.
    return np.random.default_rng(zlib.adler32(str(seed_tuple).encode()))
