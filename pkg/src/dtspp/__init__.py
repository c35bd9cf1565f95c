"""Speech enhancement via a two-stage dual-tree complex wavelet packet
transform with a speech-presence-probability weighted MMSE magnitude
estimator."""

__version__ = "0.1.0"
