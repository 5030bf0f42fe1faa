"""
Seeded corpus of random plane germs.

Generates convenient, non-degenerate polynomials in (x, y) with small integer
coefficients, for property suites and quick experiments. The same seed always
yields the same corpus.
"""
import logging

import numpy as np
import pandas as pd

from .newton import newton_boundary, newton_number_2d, nondegeneracy_2d
from .polycore import Polynomial

logger = logging.getLogger(__name__)

VARIABLES = ("x", "y")
MAX_SUPPORT = 8
MAX_DEGREE = 12


def _coefficient(rng: np.random.Generator) -> int:
    value = int(rng.integers(1, 6))
    return value if rng.random() < 0.5 else -value


def random_plane_germ(rng: np.random.Generator, max_tries: int = 200) -> Polynomial:
    """
    One convenient non-degenerate germ with at most 8 terms of degree <= 12.

    Parameters:
    -----------
    rng : np.random.Generator
        Source of randomness
    max_tries : int
        Rejection-sampling cap

    Returns:
    --------
    Polynomial
    """
    for _ in range(max_tries):
        a_x = int(rng.integers(2, 9))
        a_y = int(rng.integers(2, 9))
        terms = {(a_x, 0): _coefficient(rng), (0, a_y): _coefficient(rng)}
        for _ in range(int(rng.integers(0, MAX_SUPPORT - 1))):
            i = int(rng.integers(1, MAX_DEGREE))
            j = int(rng.integers(1, MAX_DEGREE - i + 1))
            terms[(i, j)] = _coefficient(rng)
        p = Polynomial(VARIABLES, terms)
        if nondegeneracy_2d(p):
            return p
    raise RuntimeError(f"no non-degenerate germ found in {max_tries} tries")


def generate_germ_corpus(n_samples: int = 30, seed: int = 42) -> pd.DataFrame:
    """
    Generate a corpus of random germs.

    Parameters:
    -----------
    n_samples : int
        Number of germs to generate
    seed : int
        Random seed for reproducibility

    Returns:
    --------
    pd.DataFrame
        One row per germ: expression, term count, degree, intercepts and
        Newton number.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for index in range(n_samples):
        p = random_plane_germ(rng)
        a_x, a_y = newton_boundary(p).intercepts
        rows.append({
            "germ_id": f"GERM_{index:03d}",
            "expression": str(p),
            "terms": len(p.terms),
            "degree": p.degree,
            "a_x": a_x,
            "a_y": a_y,
            "edges": len(newton_boundary(p).edges),
            "newton_number": newton_number_2d(p),
        })
    logger.info(f"Generated {len(rows)} germs with seed {seed}")
    return pd.DataFrame(rows)


if __name__ == "__main__":
    print("=" * 60)
    print("RANDOM PLANE GERM CORPUS")
    print("=" * 60)
    corpus = generate_germ_corpus()
    print(corpus.to_string(index=False))
    print("\n" + "=" * 60)
    print("Newton number statistics:")
    print(corpus["newton_number"].describe())
