"""Photon-pair spectra under coherent and phase-random pumping.

Modules: ``spectral`` (grids, lineshapes, TVD asymmetry), ``shg`` (doubling
transfer), ``jsa`` (joint spectral amplitudes), ``hom`` (interference and
Fisher information), ``data_io`` and ``cli``.
"""

__version__ = "0.1.0"
