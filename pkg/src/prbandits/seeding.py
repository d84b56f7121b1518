"""Seed fan-out: one master seed splits into named independent streams so
adding or reordering a consumer never perturbs the others.

Stream `name` is seeded with SeedSequence((master, STREAM_IDS[name])).
"""
import numpy as np

STREAM_IDS = {
    "env": 0,     # round sampling + reward noise
    "f1": 1,      # exploitation-net init
    "f2": 2,      # exploration-net init
    "tie": 3,     # argmax tie-breaking
    "ts": 4,      # Thompson sampling draws
    "train": 5,   # shuffle seeds for checkpoint training
}


def stream(master_seed, name):
    return np.random.default_rng(np.random.SeedSequence((int(master_seed), STREAM_IDS[name])))


def all_streams(master_seed):
    return {name: stream(master_seed, name) for name in STREAM_IDS}
