"""Derive independent, reproducible seeds from one master seed.

split(seed, "protocol", 3) hashes the master seed together with the labels,
so each sub-pipeline gets its own stream and can be re-run in isolation.
"""
import hashlib
import random

import numpy as np


def split(seed, *labels) -> int:
    h = hashlib.sha256(str(int(seed)).encode())
    for lab in labels:
        h.update(b"/")
        h.update(str(lab).encode())
    return int.from_bytes(h.digest()[:8], "big")


def py_rng(seed, *labels):
    return random.Random(split(seed, *labels))


def np_rng(seed, *labels):
    return np.random.default_rng(split(seed, *labels))
