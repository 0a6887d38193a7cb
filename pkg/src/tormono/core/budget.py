"""Search budgets used when a caller does not pass its own."""

from __future__ import annotations

# Lattice-coefficient bound for every bounded search (CLI --bound)
DEFAULT_BOUND = 16

# Iterative deepening cap for the fundamental unit search
FUNDAMENTAL_UNIT_CAP = 10**6

# stable_split fallback: lattice coefficients and candidate block entries
STABLE_LATTICE_BOUND = 20
STABLE_BLOCK_BOUND = 30

# Hard caps on enumerated lattice points per similarity search
MAX_LATTICE_POINTS = 50_000
STABLE_SEARCH_POINTS = 5_000
