import numpy as np
from hypothesis import settings

from poissonqm.bipartite import random_bipartite
from poissonqm.canonical import pushforward, random_canonical
from poissonqm.gellmann import basis_for, matrix_to_state

settings.register_profile("default", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("default")


def pure_state(n, seed):
    return pushforward(random_canonical(n, seed), basis_for(n))


def mixed_state(n, seed, rank=None):
    """Random density matrix of the given rank (full rank by default)."""
    a = random_bipartite(n, rank or n, seed).a
    return matrix_to_state(a @ a.conj().T, basis_for(n))
