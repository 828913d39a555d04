"""Self-supervised ECG representation learning.

Two-stage pipeline: a multi-task 1D CNN is trained to recognize which of
six signal transformations was applied to an ECG segment (the pretext
stage), then the frozen convolutional trunk is transferred to a supervised
emotion classifier (the downstream stage).  Everything runs on numpy in
double precision with seeded, reproducible randomness.
"""

__version__ = "0.1.0"

__all__ = [
    "signals",
    "transforms",
    "synth",
    "datasets",
    "metrics",
    "nn",
    "pretext",
    "downstream",
    "sweep",
    "config",
]


def __getattr__(name):
    # Lazy submodule access keeps `import ecgssl` cheap and lets the CLI
    # pin BLAS thread configuration before numpy loads.
    if name in __all__:
        import importlib

        return importlib.import_module(f".{name}", __name__)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
