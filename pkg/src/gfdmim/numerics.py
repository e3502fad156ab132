"""Complex linear-algebra and seeded-RNG substrate shared by all modules."""
import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.linalg import circulant as _scipy_circulant

_SEED_MAX = 2**64


def substream(seed: int, *stream: int) -> np.random.Generator:
    """Independent generator for (seed, stream-index...), reproducible across runs."""
    if not 0 <= seed < _SEED_MAX:
        raise ValueError(f"seed must be in [0, 2^64), got {seed}")
    return np.random.default_rng(np.random.SeedSequence([seed, *stream]))


def hermitian_solve(a: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Solve a @ x = y for Hermitian positive-definite a via Cholesky.

    Raises numpy.linalg.LinAlgError when a is not positive definite
    (e.g. a rank-deficient normal matrix with zero regularization).
    """
    a = np.asarray(a)
    y = np.asarray(y)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected square matrix, got shape {a.shape}")
    if y.shape[0] != a.shape[0]:
        raise ValueError(f"row counts differ: {a.shape[0]} vs {y.shape[0]}")
    return cho_solve(cho_factor(a), y)


def circulant(first_column: np.ndarray, size: int) -> np.ndarray:
    """size x size circulant whose column j is first_column shifted down by j."""
    c = np.asarray(first_column)
    if c.ndim != 1:
        raise ValueError("first_column must be 1-D")
    if len(c) > size:
        raise ValueError(f"first_column length {len(c)} exceeds size {size}")
    padded = np.zeros(size, dtype=complex)
    padded[: len(c)] = c
    return _scipy_circulant(padded)


def complex_gaussian(rng: np.random.Generator, n: int, variance: float) -> np.ndarray:
    """n i.i.d. circularly symmetric complex Gaussians, total variance per entry."""
    if variance <= 0:
        raise ValueError(f"variance must be positive, got {variance}")
    scale = np.sqrt(variance / 2.0)
    return rng.normal(0.0, scale, n) + 1j * rng.normal(0.0, scale, n)
