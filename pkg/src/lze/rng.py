"""Keyed random substreams.

Each consumer derives its own generator from the run seed plus integer keys
(purpose tag, step, prompt, ...), so results never depend on the order in
which other consumers drew numbers.
"""

import numpy as np

ROLLOUT = 1
SELECT = 2
REPLAY = 3
REPLAY_ROLLOUT = 4
INIT = 5
MINIBATCH = 6
ENV = 7


def substream(seed: int, *keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, keys)])))
