import numpy as np
import pytest


def dft_oracle(frame, a_ref=1.0):
    """Direct O(N^2) one-sided DFT sum with the package's scaling convention.

    Independent of numpy's FFT: evaluates the definition term by term via an
    explicit outer-product kernel.
    """
    x = np.asarray(frame, dtype=np.float64)
    n = len(x)
    k = np.arange(n // 2 + 1)[:, None]
    nn = np.arange(n)[None, :]
    kernel = np.exp(-2j * np.pi * k * nn / n)
    coeffs = kernel @ x * (2.0 / (n * a_ref))
    coeffs[0] *= 0.5
    coeffs[-1] *= 0.5
    return coeffs


def inverse_oracle(coeffs, a_ref=1.0):
    """Direct inverse of dft_oracle: real part of the hermitian resum."""
    c = np.asarray(coeffs, dtype=np.complex128)
    n = 2 * (len(c) - 1)
    full = np.zeros(n, dtype=np.complex128)
    full[: len(c)] = c
    full[0] *= n * a_ref
    full[len(c) - 1] *= n * a_ref
    full[1 : len(c) - 1] *= n * a_ref / 2.0
    full[len(c):] = np.conj(full[1 : len(c) - 1][::-1])
    nn = np.arange(n)[:, None]
    k = np.arange(n)[None, :]
    return (full[None, :] * np.exp(2j * np.pi * nn * k / n)).sum(axis=1).real / n


@pytest.fixture
def rng():
    return np.random.default_rng(0xC5BEC)
