"""Platform-independent seed derivation.

Every random decision in a search run is keyed by ``mix64(master, index)``:
trial ``i`` of the random stage uses index ``i``; the data split, the CV folds
and the trees use fixed stream indices above 2**32 so they never collide
with trial indices.
"""

from dataclasses import dataclass

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

SPLIT_STREAM = 1 << 32
FOLD_STREAM = (1 << 32) + 1
TREE_STREAM = (1 << 32) + 2
REPEAT_STREAM = (1 << 32) + 3


def mix64(master: int, index: int) -> int:
    """SplitMix64 finaliser applied to ``master + (index + 1) * golden``."""
    z = (master + (index + 1) * GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int

    def __post_init__(self):
        if not 0 <= self.master_seed <= MASK64:
            raise ValueError("master seed must be an unsigned 64-bit integer")

    def trial_seed(self, index: int) -> int:
        return mix64(self.master_seed, index)

    @property
    def split_seed(self) -> int:
        return mix64(self.master_seed, SPLIT_STREAM)

    @property
    def fold_seed(self) -> int:
        return mix64(self.master_seed, FOLD_STREAM)

    @property
    def tree_seed(self) -> int:
        return mix64(self.master_seed, TREE_STREAM)

    def repeat(self, r: int) -> "SeedSpec":
        """Seed spec for repetition ``r`` of a multi-seed benchmark."""
        return SeedSpec(mix64(self.master_seed, r))
