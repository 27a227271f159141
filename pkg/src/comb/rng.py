"""Stateless random streams keyed by (seed, quantity).

Every draw is a pure function of its key, so parallel workers need no shared
generator state and a value at a given index never depends on how many other
values were drawn before it.
"""
import numpy as np

MASK64 = (1 << 64) - 1

QUANTITY_IDS = {
    'detuning': 1,
    'coupling': 2,
    'initial': 3,
}


def stream_key(seed: int, quantity: str) -> int:
    """128-bit Philox key: quantity id in the high word, seed in the low word."""
    try:
        qid = QUANTITY_IDS[quantity]
    except KeyError:
        raise ValueError(f'unknown random quantity {quantity!r}') from None
    return (qid << 64) | (int(seed) & MASK64)


def uniform_stream(seed: int, quantity: str, count: int) -> np.ndarray:
    """`count` draws from U[-1, 1); element i is fixed by (seed, quantity, i)."""
    gen = np.random.Generator(np.random.Philox(key=stream_key(seed, quantity)))
    return gen.uniform(-1.0, 1.0, count)


def realization_seed(master_seed: int, eta_index: int, realization_index: int) -> int:
    """64-bit seed for one disorder realization."""
    seq = np.random.SeedSequence([int(master_seed) & MASK64, int(eta_index), int(realization_index)])
    return int(seq.generate_state(1, np.uint64)[0])
