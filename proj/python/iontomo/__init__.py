"""Symplectic tomograms of a trapped ion in a parametric (Paul) trap."""

from ._core import (
    IontomoError,
    cat_sinogram,
    gaussian_moments,
    radon_reconstruct,
    solve_epsilon,
    tomogram_cat,
    wigner_cat,
)

__all__ = [
    "IontomoError",
    "cat_sinogram",
    "gaussian_moments",
    "radon_reconstruct",
    "solve_epsilon",
    "tomogram_cat",
    "wigner_cat",
]
