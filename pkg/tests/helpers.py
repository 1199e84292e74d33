"""Shared helpers for the test suite."""

from __future__ import annotations

import random

from gadet import Signature, all_signatures, random_multivector

SIGNATURES = all_signatures()


def random_mvs(sig: Signature, count: int, seed: int, *, float_backend=False):
    r = random.Random(seed * 1000 + sig.p * 10 + sig.q)
    return [random_multivector(sig, r, float_backend=float_backend)
            for _ in range(count)]
